#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "semilag/vec.hpp"

namespace semilag {

/// Uniform lattice k*Z^d restricted to [lo - padding, hi + padding], with the
/// padded box snapped outward to multiples of k. Node n along an axis sits at
/// (origin[axis] + n) * k, so coordinates never accumulate rounding.
class LatticeSpec {
public:
    LatticeSpec(int dim, double k, Vec lo, Vec hi, double padding);

    int dim() const { return dim_; }
    double k() const { return k_; }
    Vec lo() const { return lo_; }          ///< un-padded box
    Vec hi() const { return hi_; }
    double padding() const { return padding_; }

    long origin(int axis) const { return origin_[axis]; }
    int count(int axis) const { return count_[axis]; }
    std::size_t size() const { return static_cast<std::size_t>(count_[0]) * count_[1]; }

    Vec padded_lo() const { return node({0, 0}); }
    Vec padded_hi() const { return node({count_[0] - 1, count_[1] - 1}); }

    /// Row-major: index = i0 * count(1) + i1; count(1) == 1 in one dimension.
    std::size_t index(std::array<int, 2> multi) const {
        return static_cast<std::size_t>(multi[0]) * count_[1] + multi[1];
    }
    std::array<int, 2> multi_index(std::size_t index) const {
        return {static_cast<int>(index / count_[1]), static_cast<int>(index % count_[1])};
    }
    Vec node(std::array<int, 2> multi) const;
    Vec node(std::size_t index) const { return node(multi_index(index)); }

    bool contains(Vec x) const;              ///< inside the padded box
    bool in_box(Vec x, double tol = 1e-12) const;  ///< inside the un-padded box
    Vec clamp(Vec x) const;                  ///< nearest point of the padded box

    /// Multi-index of the node nearest to x (ties round up), not clamped.
    std::array<long, 2> nearest(Vec x) const;

    bool operator==(const LatticeSpec& o) const;

private:
    int dim_;
    double k_;
    Vec lo_, hi_;
    double padding_;
    std::array<long, 2> origin_{0, 0};
    std::array<int, 2> count_{1, 1};
};

struct Stencil {
    std::array<std::size_t, 3> node{};
    std::array<double, 3> weight{};
    int size = 0;
};

/// P1 weights of x on the Kuhn triangulation; at most d+1 nonzero entries.
/// Throws OutOfDomain outside the padded box.
Stencil barycentric_weights(const LatticeSpec& spec, Vec x);

class LatticeField {
public:
    LatticeField(std::shared_ptr<const LatticeSpec> spec, std::vector<double> values);

    const LatticeSpec& spec() const { return *spec_; }
    const std::shared_ptr<const LatticeSpec>& spec_ptr() const { return spec_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    std::shared_ptr<const LatticeSpec> spec_;
    std::vector<double> values_;
};

/// P_k w(x). Throws OutOfDomain outside the padded box.
double interpolate(const LatticeField& field, Vec x);

/// Clamps x to the padded box first and bumps `clamp_count` when it had to.
double interpolate_clamped(const LatticeField& field, Vec x, long& clamp_count);

LatticeField project(std::shared_ptr<const LatticeSpec> spec, const std::function<double(Vec)>& f);

/// Exact sup of P_k q - q over one cell for q = bound * |x|^2, i.e.
/// bound * k^2 d / 4.
double interpolation_error_bound(const LatticeSpec& spec, double second_diff_bound);

/// Columns: i0[,i1],x[,y],value.
void write_csv(std::ostream& os, const LatticeField& field);

}  // namespace semilag
