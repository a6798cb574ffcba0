#pragma once

#include "arith.hpp"
#include "bigint.hpp"
#include "cache.hpp"
#include "density.hpp"
#include "factor.hpp"
#include "factored_integer.hpp"
#include "mersenne.hpp"
#include "primality.hpp"
#include "prime_sieve.hpp"
#include "ratio.hpp"
#include "series.hpp"
