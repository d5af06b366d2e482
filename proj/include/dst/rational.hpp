#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dst {

// Exact rational with unsigned 64-bit terms, always stored reduced.
// Used for frame shifts (seconds per frame) and frame rates (Hz) so that
// shifts like 1/86 s stay exact through duration arithmetic.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    constexpr Rational() = default;
    Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        std::uint64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    bool positive() const { return num > 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational reciprocal() const {
        if (num == 0) throw std::invalid_argument("Rational: reciprocal of zero");
        return Rational(den, num);
    }

    Rational times(std::uint64_t n) const { return Rational(num * n, den); }
    Rational over(std::uint64_t n) const {
        if (n == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(num, den * n);
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Parses "num/den" or a bare integer "num".
Rational parse_rational(const std::string& text);

}  // namespace dst
