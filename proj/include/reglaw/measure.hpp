#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reglaw {

struct measure_error : std::runtime_error {
    explicit measure_error(const std::string& what) : std::runtime_error(what) {}
};

// Weighted-sample representation of a finite signed measure. Positions are
// flattened row-major (particle i occupies [i*d, (i+1)*d)). An optional
// density closure supplies the exact density where known, and optional IBP
// weight samples (keyed by multi-index) ride along for the ibp module.
class ParticleMeasure {
public:
    using Density = std::function<double(std::span<const double>)>;

    ParticleMeasure() : dim_(1) {}
    ParticleMeasure(int dim, std::vector<double> positions, std::vector<double> weights);

    static ParticleMeasure dirac(std::vector<double> x);

    int dim() const { return dim_; }
    std::size_t count() const { return weights_.size(); }
    std::span<const double> position(std::size_t i) const {
        return {positions_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& weights() const { return weights_; }
    double total_variation() const;
    double total_mass() const;

    // Σ_i w_i f(X_i)
    double integrate(const std::function<double(std::span<const double>)>& f) const;

    void set_density(Density d) { density_ = std::move(d); }
    bool has_density() const { return static_cast<bool>(density_); }
    double density_at(std::span<const double> x) const;

    std::map<std::vector<int>, std::vector<double>>& ibp_weights() { return ibp_weights_; }
    const std::map<std::vector<int>, std::vector<double>>& ibp_weights() const {
        return ibp_weights_;
    }

private:
    int dim_;
    std::vector<double> positions_, weights_;
    Density density_;
    std::map<std::vector<int>, std::vector<double>> ibp_weights_;
};

} // namespace reglaw
