#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace hb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Product with the measure-theoretic convention 0 * inf = 0.
inline double prod0(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}
inline double prod0(double a, double b, double c) { return prod0(prod0(a, b), c); }

/// pow with the conventions 0^0 = 1, 0^neg = +inf, inf^neg = 0 used by the
/// weighted functionals.
inline double powi(double base, double e) {
    if (e == 0.0) return 1.0;
    if (base == 0.0) return e > 0.0 ? 0.0 : kInf;
    if (std::isinf(base)) return e > 0.0 ? kInf : 0.0;
    return std::pow(base, e);
}

/// Deterministic 64-bit mix, used to derive per-instance seeds from a master
/// seed without correlation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double a, double b) {
        std::uniform_real_distribution<double> d(a, b);
        return d(gen);
    }
    /// Sample log-uniformly from [a, b], 0 < a < b.
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }
    double normal(double mu = 0.0, double sigma = 1.0) {
        std::normal_distribution<double> d(mu, sigma);
        return d(gen);
    }
    std::uint64_t next_seed() { return splitmix64(gen()); }
    int uniform_int(int a, int b) {
        std::uniform_int_distribution<int> d(a, b);
        return d(gen);
    }
};

/// Locale-independent 17-significant-digit formatting; infinities spelled
/// "inf"/"-inf" so they survive JSON/CSV round trips.
inline std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_real(const std::string& s) {
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("cannot parse real number: '" + s + "'");
    return v;
}

}  // namespace hb
