#pragma once

#include <cassert>
#include <compare>

namespace semilag {

/// A real number or +inf. The infinite state is a flag, never a large float,
/// so domain boundaries of conjugates stay exact.
class ExtReal {
public:
    constexpr ExtReal(double v = 0.0) : value_(v), infinite_(false) {}  // NOLINT: implicit by intent

    static constexpr ExtReal infinity() {
        ExtReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_finite() const { return !infinite_; }
    constexpr bool is_infinite() const { return infinite_; }

    /// Finite value; must not be called on +inf.
    constexpr double value() const {
        assert(!infinite_);
        return value_;
    }

    friend constexpr ExtReal operator+(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtReal(a.value_ + b.value_);
    }

    friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
        if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
        if (a.infinite_) return std::partial_ordering::greater;
        if (b.infinite_) return std::partial_ordering::less;
        return a.value_ <=> b.value_;
    }

private:
    double value_;
    bool infinite_;
};

}  // namespace semilag
