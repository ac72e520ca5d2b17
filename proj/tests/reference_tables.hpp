#pragma once

// Reference solutions of the two worked examples, transcribed to 7
// significant digits. Row r corresponds to w1 = 0.1 * (r + 1), w2 = 1 - w1.

#include <array>

namespace mogp::reference {

inline constexpr std::array<double, 5> kW1 = {0.1, 0.2, 0.3, 0.4, 0.5};

// w01 w02 w03 w04 w05 w11 w12 w21
inline constexpr std::array<std::array<double, 8>, 5> kExample1Dual = {{
    {0.2308894, 0.3045667, 0.3329927, 0.1305293, 0.0010217, 0.051051, 0.014213, 0.3319702},
    {0.2310206, 0.3044397, 0.3331819, 0.1306035, 0.0004543, 0.051080, 0.014221, 0.3319701},
    {0.2310643, 0.3047974, 0.3332450, 0.1306282, 0.000265092, 0.05109, 0.0142237, 0.3329799},
    {0.2310862, 0.3048263, 0.3332765, 0.1306406, 0.000170424, 0.051095, 0.014225, 0.3331061},
    {0.2310993, 0.3048436, 0.3332955, 0.1306480, 0.000113614, 0.051098, 0.0142259, 0.3331818},
}};
inline constexpr std::array<double, 5> kExample1Z = {8.80776, 17.60555, 26.40333, 35.20111, 43.99888};
inline constexpr std::array<double, 4> kExample1X = {5.084055, 2.682555, 7.332315, 5.748367};
inline constexpr double kExample1G10 = 87.98776;
inline constexpr double kExample1G20 = 0.01;

// w01 w02 w03 w11 w12 w21
inline constexpr std::array<std::array<double, 6>, 5> kExample2Dual = {{
    {0.2085711, 0.5276192, 0.2638096, 1.00, 1.055235, 0.0},
    {0.3640122, 0.4239919, 0.2119959, 0.9239919, 0.9239918, 0.076008},
    {0.4952513, 0.3364992, 0.1682496, 0.8364992, 0.8364992, 0.1635008},
    {0.604162, 0.2638920, 0.1319460, 0.7638920, 0.7638920, 0.2361080},
    {0.6959958, 0.2026694, 0.1013347, 0.7026695, 0.7026694, 0.2973305},
}};
inline constexpr std::array<double, 5> kExample2Z = {0.1642316, 0.1831441, 0.2019177, 0.2206914, 0.2394650};
inline constexpr std::array<std::array<double, 3>, 5> kExample2X = {{
    {2.527860, 8.217575, 0.3748833},
    {2.620746, 7.862237, 0.3815708},
    {2.620745, 7.862236, 0.3815709},
    {2.620747, 7.862240, 0.3815707},
    {2.620747, 7.862242, 0.3815705},
}};

inline constexpr double kExample2IdealF1 = 0.33333;
inline constexpr double kExample2IdealF2 = 0.1421595;
inline constexpr std::array<double, 3> kExample2IdealF2X = {2.148558, 9.82199, 0.3490711};

}  // namespace mogp::reference
