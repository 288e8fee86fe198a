#include "reglaw/measure.hpp"

#include <cmath>

namespace reglaw {

ParticleMeasure::ParticleMeasure(int dim, std::vector<double> positions,
                                 std::vector<double> weights)
    : dim_(dim), positions_(std::move(positions)), weights_(std::move(weights)) {
    if (dim_ < 1) throw measure_error("dimension must be positive");
    if (positions_.size() != weights_.size() * static_cast<std::size_t>(dim_))
        throw measure_error("positions/weights size mismatch");
    for (double x : positions_)
        if (!std::isfinite(x)) throw measure_error("non-finite particle position");
    double tv = 0.0;
    for (double w : weights_) tv += std::abs(w);
    if (!std::isfinite(tv)) throw measure_error("infinite total variation");
}

ParticleMeasure ParticleMeasure::dirac(std::vector<double> x) {
    int d = static_cast<int>(x.size());
    return ParticleMeasure(d, std::move(x), {1.0});
}

double ParticleMeasure::total_variation() const {
    double tv = 0.0;
    for (double w : weights_) tv += std::abs(w);
    return tv;
}

double ParticleMeasure::total_mass() const {
    double m = 0.0;
    for (double w : weights_) m += w;
    return m;
}

double ParticleMeasure::integrate(
    const std::function<double(std::span<const double>)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < count(); ++i) s += weights_[i] * f(position(i));
    return s;
}

double ParticleMeasure::density_at(std::span<const double> x) const {
    if (!density_) throw measure_error("no density closure attached");
    return density_(x);
}

} // namespace reglaw
