#ifndef ATCLOCKS_QUANTUM_VERIFY_HPP
#define ATCLOCKS_QUANTUM_VERIFY_HPP

#include "atclocks/clock_model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace atclocks {

// This module works on the literal (d+1)-state clockwork space. All matrices
// involved are real in the computational basis. Basis ordering for composite
// spaces is first-factor major: C (x) T index = c * 2 + t, C (x) C' index
// = c * (d+1) + c'.

// Jump matrix on the full state space: p(i, m) = probability of moving from
// state i to state m, expanded from the offset distribution by homogeneity.
Eigen::MatrixXd full_jump_matrix(const JumpDistribution& jumps);

// One Kraus operator of the reset-clock channel: clockwork -> clockwork (x) tick.
struct KrausOperator {
    int source;              // i
    int target;              // m
    bool tick;               // passage over 0: lands on state 0, tick register set
    Eigen::MatrixXd matrix;  // 2(d+1) x (d+1)
};

class KrausSet {
public:
    explicit KrausSet(std::vector<KrausOperator> ops, int state_dim);

    const std::vector<KrausOperator>& operators() const { return ops_; }
    int state_dim() const { return dim_; }

    // max-norm of sum M^dag M - identity
    double completeness_residual() const;

    // Channel application sum_i M_i rho M_i^dag; output on C (x) T.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& rho) const;

private:
    std::vector<KrausOperator> ops_;
    int dim_;
};

// Kraus set of the clock channel; throws if d + 1 > 64.
KrausSet build_kraus(const StochasticClock& clock);

// Channel applied both through the Kraus decomposition and through the
// defining branch formula.
struct ChannelComparison {
    Eigen::MatrixXd via_kraus;       // 2(d+1) x 2(d+1)
    Eigen::MatrixXd via_definition;
    double max_entry_difference;
};

// rho must be a valid density matrix on the (d+1)-dimensional clockwork
// (positive semidefinite, unit trace, within 1e-10).
ChannelComparison apply_channel_two_ways(const StochasticClock& clock,
                                         const Eigen::MatrixXd& rho);

// Dual-feasibility certificate for the continuity of the clock channel.
struct CertificatePair {
    Eigen::MatrixXd choi;  // J(Phi) for Phi = tr_T o channel - identity
    Eigen::MatrixXd X;     // explicit positive operator
    Eigen::MatrixXd Z;     // = X + J(Phi), dual feasible point
};

CertificatePair build_certificate(const StochasticClock& clock);

struct CertificateReport {
    double construction_residual = 0.0;      // max |Z - X - J(Phi)|
    double min_quadratic_form_X = 0.0;       // over random unit vectors
    double min_quadratic_form_Z = 0.0;
    double partial_trace_offdiag = 0.0;      // max off-diagonal of tr_C Z
    double partial_trace_entry_error = 0.0;  // max |(tr_C Z)_ii - (1 - p_ii)|
    double inf_norm = 0.0;                   // ||tr_C Z||_inf
    double epsilon_error = 0.0;              // |inf_norm - epsilon_continuity|
    std::string witness;                     // description of the first failed check
    bool ok = false;
};

// Checks positivity of X and Z over `trials` random real unit vectors and the
// partial-trace identities tying the certificate to epsilon-continuity.
CertificateReport verify_continuity_certificate(const CertificatePair& pair,
                                                const StochasticClock& clock,
                                                int trials,
                                                std::uint64_t seed = 0);

} // namespace atclocks

#endif
