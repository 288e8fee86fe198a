#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reglaw {

struct grid_error : std::runtime_error {
    explicit grid_error(const std::string& what) : std::runtime_error(what) {}
};

// Real-valued function sampled on a uniform rectangular lattice over a box in
// R^d, row-major (axis 0 slowest), with product-trapezoid quadrature weights.
class GridFunction {
public:
    GridFunction(std::vector<double> lo, std::vector<double> hi, std::vector<int> npts);

    using PointFn = std::function<double(std::span<const double>)>;
    static GridFunction sample(std::vector<double> lo, std::vector<double> hi,
                               std::vector<int> npts, const PointFn& f);
    static GridFunction sample1d(double lo, double hi, int npts,
                                 const std::function<double(double)>& f);

    int dim() const { return static_cast<int>(npts_.size()); }
    std::size_t size() const { return values_.size(); }
    int points(int axis) const { return npts_[axis]; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double coord(int axis, int i) const { return lo_[axis] + i * spacing_[axis]; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    void point(std::size_t flat, std::span<double> out) const;
    double quad_weight(std::size_t flat) const;
    double cell_volume() const;

    double integral() const;
    double inner(const GridFunction& g) const;     // ∫ f·g
    double lp_norm(double p) const;                // (∫|f|^p)^{1/p}
    double max_abs() const;
    double mass_of_weights() const;                // Σ weights (= box volume)

    GridFunction derivative(int axis) const;       // central, one-sided at edges
    GridFunction partial(const std::vector<int>& alpha) const;
    GridFunction restricted(int buffer_cells) const;
    GridFunction with_values(std::vector<double> v) const;

    // Cubic (Catmull-Rom) interpolation; returns 0 outside the box.
    double value_at(std::span<const double> x) const;

    GridFunction& operator+=(const GridFunction& g);
    GridFunction& operator-=(const GridFunction& g);
    GridFunction& operator*=(double c);

private:
    std::vector<double> lo_, hi_, spacing_;
    std::vector<int> npts_;
    std::vector<std::size_t> stride_;
    std::vector<double> values_;

    double interp_axis(int axis, std::size_t base, std::span<const double> x) const;
};

} // namespace reglaw
