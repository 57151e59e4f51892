#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "wpb/errors.hpp"

namespace wpb {

// Exact scalar. Canonical form (lowest terms, positive denominator) is
// maintained by the backend on every operation. Distances are nonnegative,
// but derived report quantities (slacks) may go negative, so the type itself
// is signed; nonnegativity is enforced where values enter a space.
class Rational {
  public:
    using backend = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(long long n) : v_(n) {}
    Rational(long long num, long long den) : v_(num, den) {}
    explicit Rational(backend v) : v_(std::move(v)) {}

    static Rational from_int(long long n) { return Rational(n); }

    // Accepts "p" or "p/q" with optional leading '-'. Anything else throws.
    static Rational parse(std::string_view text) {
        if (!looks_like_rational(text)) {
            throw ParseError("not a rational literal: '" + std::string(text) + "'");
        }
        const auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) {
                return Rational(backend(boost::multiprecision::cpp_int(std::string(text))));
            }
            boost::multiprecision::cpp_int num{std::string(text.substr(0, slash))};
            boost::multiprecision::cpp_int den{std::string(text.substr(slash + 1))};
            if (den == 0) {
                throw ParseError("zero denominator in '" + std::string(text) + "'");
            }
            return Rational(backend(num, den));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("not a rational literal: '" + std::string(text) + "'");
        }
    }

    std::string to_string() const {
        std::string out = numerator(v_).str();
        if (denominator(v_) != 1) {
            out += "/" + denominator(v_).str();
        }
        return out;
    }

    double to_double() const { return v_.convert_to<double>(); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_negative() const { return v_ < 0; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.v_.is_zero()) throw ParseError("division by zero");
        return Rational(a.v_ / b.v_);
    }
    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    const backend& value() const { return v_; }

    static bool looks_like_rational(std::string_view text) {
        std::size_t i = 0;
        if (i < text.size() && text[i] == '-') ++i;
        std::size_t digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') { ++i; ++digits; }
        if (digits == 0) return false;
        if (i == text.size()) return true;
        if (text[i] != '/') return false;
        ++i;
        digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') { ++i; ++digits; }
        return digits > 0 && i == text.size();
    }

  private:
    backend v_{};
};

// Float-mode scalar: a double paired with the tolerance it was built under.
// Comparisons are fuzzy: two values agree when they differ by at most
// max(tau, tau * max(|a|,|b|)), absolute or relative, whichever is larger.
// Tolerances propagate through arithmetic as the max of the operands'.
class Tolerant {
  public:
    static constexpr double kDefaultTau = 1e-9;

    Tolerant() = default;
    Tolerant(double v, double tau) : v_(v), tau_(tau) {}
    Tolerant(long long n) : v_(static_cast<double>(n)), tau_(0.0) {}

    static Tolerant from_int(long long n) { return Tolerant(n); }

    // Accepts rational literals ("3/8") and decimal/scientific literals.
    static Tolerant parse(std::string_view text) {
        if (Rational::looks_like_rational(text)) {
            return Tolerant(Rational::parse(text).to_double(), 0.0);
        }
        std::string buf(text);
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        if (end == buf.c_str() || *end != '\0') {
            throw ParseError("not a numeric literal: '" + buf + "'");
        }
        return Tolerant(v, 0.0);
    }

    std::string to_string() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v_);
        return buf;
    }

    double to_double() const { return v_; }
    double tau() const { return tau_; }
    Tolerant with_tau(double tau) const { return Tolerant(v_, tau); }

    bool is_zero() const { return *this == Tolerant(0); }
    bool is_negative() const { return *this < Tolerant(0); }

    friend Tolerant operator+(const Tolerant& a, const Tolerant& b) {
        return Tolerant(a.v_ + b.v_, std::max(a.tau_, b.tau_));
    }
    friend Tolerant operator-(const Tolerant& a, const Tolerant& b) {
        return Tolerant(a.v_ - b.v_, std::max(a.tau_, b.tau_));
    }
    friend Tolerant operator*(const Tolerant& a, const Tolerant& b) {
        return Tolerant(a.v_ * b.v_, std::max(a.tau_, b.tau_));
    }
    friend Tolerant operator/(const Tolerant& a, const Tolerant& b) {
        return Tolerant(a.v_ / b.v_, std::max(a.tau_, b.tau_));
    }
    Tolerant operator-() const { return Tolerant(-v_, tau_); }
    Tolerant& operator+=(const Tolerant& o) { *this = *this + o; return *this; }
    Tolerant& operator*=(const Tolerant& o) { *this = *this * o; return *this; }

    friend bool operator<=(const Tolerant& a, const Tolerant& b) {
        return a.v_ - b.v_ <= tol(a, b);
    }
    friend bool operator==(const Tolerant& a, const Tolerant& b) { return a <= b && b <= a; }
    friend bool operator!=(const Tolerant& a, const Tolerant& b) { return !(a == b); }
    friend bool operator<(const Tolerant& a, const Tolerant& b) { return !(b <= a); }
    friend bool operator>(const Tolerant& a, const Tolerant& b) { return b < a; }
    friend bool operator>=(const Tolerant& a, const Tolerant& b) { return b <= a; }

  private:
    static double tol(const Tolerant& a, const Tolerant& b) {
        const double tau = std::max(a.tau_, b.tau_);
        return std::max(tau, tau * std::max(std::fabs(a.v_), std::fabs(b.v_)));
    }

    double v_ = 0.0;
    double tau_ = 0.0;
};

template <class S>
concept ScalarNumber = requires(const S& a, const S& b) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a* b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { a == b } -> std::convertible_to<bool>;
    { a <= b } -> std::convertible_to<bool>;
    { a < b } -> std::convertible_to<bool>;
    { S::from_int(1) } -> std::convertible_to<S>;
    { S::parse("1/2") } -> std::convertible_to<S>;
    { a.to_string() } -> std::convertible_to<std::string>;
    { a.to_double() } -> std::convertible_to<double>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.is_negative() } -> std::convertible_to<bool>;
};

template <ScalarNumber S>
S half(const S& a) {
    return a / S::from_int(2);
}

template <ScalarNumber S>
S pow_n(const S& base, std::size_t n) {
    S acc = S::from_int(1);
    for (std::size_t i = 0; i < n; ++i) acc = acc * base;
    return acc;
}

// Decides a <= sqrt(k) * b for nonnegative a, b and k >= 0 by squaring:
// equivalent to a^2 <= k * b^2.
template <ScalarNumber S>
bool le_sqrt_scaled(const S& a, const S& k, const S& b) {
    return a * a <= k * (b * b);
}

// Decides a <= sqrt(k)^n * b for nonnegative a, b: a^2 <= k^n * b^2.
template <ScalarNumber S>
bool le_sqrt_pow_scaled(const S& a, const S& k, std::size_t n, const S& b) {
    return a * a <= pow_n(k, n) * (b * b);
}

}  // namespace wpb
