#pragma once

#include <stdexcept>
#include <vector>

namespace reglaw {

struct interp_error : std::runtime_error {
    explicit interp_error(const std::string& what) : std::runtime_error(what) {}
};

// Computable Banach couple: Y = ℓ¹ on N coordinates, X = weighted ℓ¹ with
// weights w_i > 0. K-functionals, the interpolation norms, and the distance
// to X-balls all admit exact finite algorithms here.
struct ToyPair {
    std::vector<double> w;
    int dim() const { return static_cast<int>(w.size()); }
};

double norm_Y(const std::vector<double>& y);
double norm_X(const ToyPair& pair, const std::vector<double>& y);

// K(y,t) = inf_x (‖y-x‖_Y + t‖x‖_X) = Σ |y_i| min(1, t w_i), exact.
double k_functional(const ToyPair& pair, const std::vector<double>& y, double t);

// |y|_{γ,b} = ∫_0^1 t^{-γ} |ln t|^b K(y,t) dt/t, adaptive on s = -ln t.
double gamma_b_norm(const ToyPair& pair, const std::vector<double>& y, double gamma, double b);

// Exact infimum of Σ_n 2^{nθ} n^a ‖y-x_n‖_Y + 2^{-2nm} ‖x_n‖_X over all
// sequences x_n (decouples per (n, i): x_{n,i} ∈ {0, y_i}).
double rho_norm(const ToyPair& pair, const std::vector<double>& y, double theta, int m, double a);

// Exact d_Y(y, B_X(R)): reduce coordinates in increasing-w order (cheapest
// Y-reduction per unit of X-budget) until the X-norm fits inside R.
double dist_to_ball(const ToyPair& pair, const std::vector<double>& y, double R);

struct NormEquivalenceReport {
    double best_C = 0.0;     // smallest single C making the two-sided bound hold
    double proof_C = 0.0;    // the constructive constant 2^{2m+θ+a+1}
    bool holds = false;
    int failures = 0;
};
NormEquivalenceReport prop_norm_equivalence(const ToyPair& pair,
                                            const std::vector<std::vector<double>>& samples,
                                            double theta, int m, double a);

struct BalanceInclusionWitness {
    bool b_condition_finite = false; // limsup L_a-weighted distance bounded
    bool witness_converges = false;  // π(y, (x_n)) truncation-stable
    double pi_value = 0.0;
    double b_limsup = 0.0;
};
BalanceInclusionWitness prop_balance_inclusion(const ToyPair& pair,
                                               const std::vector<double>& y,
                                               double theta, int m, double a);

// Checks (2m)^a 2^{2nm} >= L_a(R_n) >= 2^{2nm} with R_n = n^{-a} 2^{2nm},
// in logs, for 2 <= n <= n_hi; returns true iff the chain holds for all
// n past a small burn-in.
bool balance_witness_chain(int m, double a, int n_hi);

} // namespace reglaw
