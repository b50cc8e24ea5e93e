#pragma once

#include <cstdint>
#include <string>

#include "conival/errors.hpp"

namespace conival {

// Value group element: an integer, a half-integer or +infinity.  Stored as
// twice the value so that lambda_Q landing in (1/2)Z stays exact.  Infinity
// is an explicit state, never a sentinel integer.
class Zinf {
public:
    constexpr Zinf() : twice_(0), inf_(true) {}

    static constexpr Zinf infinity() { return Zinf(); }
    static constexpr Zinf of(long long n) { return Zinf(2 * n, false); }
    static constexpr Zinf halves(long long twice) { return Zinf(twice, false); }

    bool is_infinity() const { return inf_; }
    bool is_integer() const { return inf_ || twice_ % 2 == 0; }

    // Exact integer value; throws on infinity or a proper half-integer.
    long long as_integer() const {
        if (inf_) throw Error("Zinf: infinity has no integer value");
        if (twice_ % 2 != 0) throw Error("Zinf: half-integer is not an integer");
        return twice_ / 2;
    }
    long long twice() const {
        if (inf_) throw Error("Zinf: infinity has no finite value");
        return twice_;
    }

    Zinf operator+(const Zinf& o) const {
        if (inf_ || o.inf_) return infinity();
        return halves(twice_ + o.twice_);
    }
    Zinf operator-(const Zinf& o) const {
        if (inf_) return infinity();
        if (o.inf_) throw Error("Zinf: cannot subtract infinity");
        return halves(twice_ - o.twice_);
    }
    Zinf operator-() const {
        if (inf_) throw Error("Zinf: cannot negate infinity");
        return halves(-twice_);
    }
    Zinf operator*(long long c) const {
        if (inf_) return infinity();
        return halves(twice_ * c);
    }

    // Total order with infinity on top.
    bool operator==(const Zinf& o) const {
        return inf_ == o.inf_ && (inf_ || twice_ == o.twice_);
    }
    bool operator!=(const Zinf& o) const { return !(*this == o); }
    bool operator<(const Zinf& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return twice_ < o.twice_;
    }
    bool operator<=(const Zinf& o) const { return *this < o || *this == o; }
    bool operator>(const Zinf& o) const { return o < *this; }
    bool operator>=(const Zinf& o) const { return o <= *this; }

    static Zinf min(const Zinf& a, const Zinf& b) { return a < b ? a : b; }

    std::string str() const {
        if (inf_) return "inf";
        if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

private:
    constexpr Zinf(long long twice, bool inf) : twice_(twice), inf_(inf) {}
    long long twice_;
    bool inf_;
};

} // namespace conival
