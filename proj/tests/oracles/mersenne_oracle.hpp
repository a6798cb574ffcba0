#pragma once

// Generated by gen_mersenne_oracle.py (sympy factorint); do not edit.

#include <array>

namespace mlab::oracle {

inline constexpr int kLargestPrimeMaxN = 120;

// kLargestPrime[n] = P(2^n - 1) in decimal; entries 0 and 1 are empty.
inline constexpr std::array<const char*, 121> kLargestPrime = {
    "", "",
    "3",  // n = 2
    "7",  // n = 3
    "5",  // n = 4
    "31",  // n = 5
    "7",  // n = 6
    "127",  // n = 7
    "17",  // n = 8
    "73",  // n = 9
    "31",  // n = 10
    "89",  // n = 11
    "13",  // n = 12
    "8191",  // n = 13
    "127",  // n = 14
    "151",  // n = 15
    "257",  // n = 16
    "131071",  // n = 17
    "73",  // n = 18
    "524287",  // n = 19
    "41",  // n = 20
    "337",  // n = 21
    "683",  // n = 22
    "178481",  // n = 23
    "241",  // n = 24
    "1801",  // n = 25
    "8191",  // n = 26
    "262657",  // n = 27
    "127",  // n = 28
    "2089",  // n = 29
    "331",  // n = 30
    "2147483647",  // n = 31
    "65537",  // n = 32
    "599479",  // n = 33
    "131071",  // n = 34
    "122921",  // n = 35
    "109",  // n = 36
    "616318177",  // n = 37
    "524287",  // n = 38
    "121369",  // n = 39
    "61681",  // n = 40
    "164511353",  // n = 41
    "5419",  // n = 42
    "2099863",  // n = 43
    "2113",  // n = 44
    "23311",  // n = 45
    "2796203",  // n = 46
    "13264529",  // n = 47
    "673",  // n = 48
    "4432676798593",  // n = 49
    "4051",  // n = 50
    "131071",  // n = 51
    "8191",  // n = 52
    "20394401",  // n = 53
    "262657",  // n = 54
    "201961",  // n = 55
    "15790321",  // n = 56
    "1212847",  // n = 57
    "3033169",  // n = 58
    "3203431780337",  // n = 59
    "1321",  // n = 60
    "2305843009213693951",  // n = 61
    "2147483647",  // n = 62
    "649657",  // n = 63
    "6700417",  // n = 64
    "145295143558111",  // n = 65
    "599479",  // n = 66
    "761838257287",  // n = 67
    "131071",  // n = 68
    "10052678938039",  // n = 69
    "122921",  // n = 70
    "212885833",  // n = 71
    "38737",  // n = 72
    "9361973132609",  // n = 73
    "616318177",  // n = 74
    "10567201",  // n = 75
    "525313",  // n = 76
    "581283643249112959",  // n = 77
    "22366891",  // n = 78
    "1113491139767",  // n = 79
    "4278255361",  // n = 80
    "97685839",  // n = 81
    "8831418697",  // n = 82
    "57912614113275649087721",  // n = 83
    "14449",  // n = 84
    "9520972806333758431",  // n = 85
    "2932031007403",  // n = 86
    "9857737155463",  // n = 87
    "2931542417",  // n = 88
    "618970019642690137449562111",  // n = 89
    "18837001",  // n = 90
    "23140471537",  // n = 91
    "2796203",  // n = 92
    "658812288653553079",  // n = 93
    "165768537521",  // n = 94
    "30327152671",  // n = 95
    "22253377",  // n = 96
    "13842607235828485645766393",  // n = 97
    "4432676798593",  // n = 98
    "33057806959",  // n = 99
    "268501",  // n = 100
    "341117531003194129",  // n = 101
    "131071",  // n = 102
    "3976656429941438590393",  // n = 103
    "308761441",  // n = 104
    "152041",  // n = 105
    "28059810762433",  // n = 106
    "162259276829213363391578010288127",  // n = 107
    "279073",  // n = 108
    "870035986098720987332873",  // n = 109
    "48912491",  // n = 110
    "616318177",  // n = 111
    "54410972897",  // n = 112
    "1066818132868207",  // n = 113
    "160465489",  // n = 114
    "2646507710984041",  // n = 115
    "536903681",  // n = 116
    "7830118297",  // n = 117
    "3203431780337",  // n = 118
    "131105292137",  // n = 119
    "4562284561",  // n = 120
};

inline constexpr double kSigmaAlpha0To13 = 1.0522410405713967;
inline constexpr double kSigmaAlpha04To120 = 1.3038416537309816;

}  // namespace mlab::oracle
