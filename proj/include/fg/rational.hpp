#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace fg {

// Exact rational with an "infinity" state, used for normalized valuations
// (value group (1/e)Z) and for tail slopes. Magnitudes stay tiny.
class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    constexpr Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    static constexpr Rat infinity() {
        Rat r;
        r.num_ = 1;
        r.den_ = 0;
        return r;
    }

    bool is_infinite() const { return den_ == 0; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, std::int64_t k) {
        if (a.is_infinite()) return infinity();
        return Rat(a.num_ * k, a.den_);
    }
    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rat& a, const Rat& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        if (is_infinite()) return "inf";
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ == 0) {
            num_ = 1;
            return;
        }
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_;
    std::int64_t den_;  // 0 encodes +infinity
};

}  // namespace fg
