#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reglaw/measure.hpp"

namespace reglaw {

// Finite family of smooth, axis-separable test functions with certified
// upper bounds on ‖φ‖_{k,∞}, realizing the dual distance sup from below:
// d_k(μ,ν) >= max_j |∫φ_j dμ - ∫φ_j dν| / ‖φ_j‖_{k,∞}.
class TestDictionary {
public:
    static TestDictionary standard(int dim, int k_max = 7);

    int dim() const { return dim_; }
    int k_max() const { return k_max_; }
    std::size_t size() const { return entries_.size(); }
    double eval(std::size_t j, std::span<const double> x) const;
    double k_norm(std::size_t j, int k) const; // upper bound of ‖φ_j‖_{k,∞}
    const std::string& label(std::size_t j) const { return entries_[j].label; }

    // Lower-bound estimate of d_k between two particle measures.
    double distance_lower(const ParticleMeasure& mu, const ParticleMeasure& nu,
                          int k) const;

    // Recorded once per dictionary: estimate of d_0(δ_0, δ_1)/2 shortfall.
    double defect() const { return defect_; }

private:
    struct Primitive {
        std::function<double(double)> f;
        std::vector<double> dsup; // sup |f^(r)|, r = 0..k_max
        std::string label;
    };
    struct Entry {
        std::vector<int> axes; // primitive index per axis
        std::vector<double> knorm;
        std::string label;
    };

    int dim_ = 1, k_max_ = 7;
    std::vector<Primitive> prims_;
    std::vector<Entry> entries_;
    double defect_ = 0.0;

    void add_entry(const std::vector<int>& axes);
    void compute_defect();
};

} // namespace reglaw
