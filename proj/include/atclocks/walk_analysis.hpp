#ifndef ATCLOCKS_WALK_ANALYSIS_HPP
#define ATCLOCKS_WALK_ANALYSIS_HPP

#include "atclocks/clock_model.hpp"

#include <Eigen/Core>

#include <string>

namespace atclocks {

// Distribution of the per-round change of the relative position Q.
class DeltaDistribution {
public:
    // probs has size 2m + 1; probs[k + m] = P(Delta = k) for k in {-m, ..., m}.
    DeltaDistribution(int max_offset, Eigen::VectorXd probs);

    int max_offset() const { return m_; }
    double prob(int k) const { return probs_[k + m_]; }
    bool symmetric() const { return symmetric_; }

    // sum_k k^2 P(Delta = k)
    double second_moment() const;

    static constexpr double kNormalizationTolerance = 1e-12;

private:
    int m_;
    Eigen::VectorXd probs_;
    bool symmetric_;
};

// Law of offset_A - offset_B under independent draws (discrete
// cross-correlation of the two offset distributions).
DeltaDistribution delta_distribution(const JumpDistribution& a,
                                     const JumpDistribution& b);

// Absorbing-walk problem: boundaries are absorbing and exclusive of the
// interior; any crossing beyond a boundary counts as absorbed (D = 0).
struct AbsorptionProblem {
    DeltaDistribution delta;
    long lower_boundary;
    long upper_boundary;
    long start;

    void validate() const;
};

// Expected steps to absorption from every interior z (index z - lower - 1),
// by direct elimination of the banded linear system
//   D_z = 1 + sum_k P(Delta = k) D_{z+k},  D = 0 outside the interior.
// All entries are +infinity when the walk never moves.
Eigen::VectorXd solve_expected_absorption_profile(const DeltaDistribution& delta,
                                                  long lower_boundary,
                                                  long upper_boundary);

// D_start for one problem; the brute-force oracle for the closed forms.
double solve_expected_absorption(const AbsorptionProblem& problem);

enum class BoundaryPair {
    necessary,  // absorbing at (-1, d+1)
    sufficient  // absorbing at (-d-1, 2d+1)
};

// Closed-form D_z for a symmetric Delta distribution:
//   necessary:  (d + 1 + d z - z^2)       / (2 sum k^2 p_k)
//   sufficient: (2d^2 + 3d + 1 + d z - z^2) / (2 sum k^2 p_k)
// z may be fractional (the quadratic extends off-lattice, e.g. z = d/2).
double closed_form_D(int d, double z, const DeltaDistribution& delta,
                     BoundaryPair boundary);

enum class BoundVariant {
    eq5_general,
    theorem1,
    theorem2_headline,
    theorem2_appendix_exact,
    perfect_vs_ladder,
};

const char* to_string(BoundVariant variant);

// Evaluated analytic bounds. D entries are expected applications, N entries
// expected ticks; NaN marks a quantity the variant does not determine.
struct BoundReport {
    int d = 0;
    BoundVariant variant = BoundVariant::eq5_general;
    double D_lower = 0.0;
    double D_upper = 0.0;
    double N_lower = 0.0;
    double N_upper = 0.0;
    std::string notes;
};

// D bounds at the optimal start z = d/2 for identical clocks. N is left NaN:
// the Delta distribution alone does not determine E(Y).
BoundReport bound_eq5(int d, const DeltaDistribution& delta);

// Envelope over all identical epsilon-continuous clocks with the given jump
// parameters (p_step = p_{i,i+1}, p_0m = mass on the furthest offset m).
BoundReport theorem1_bounds(int d, double epsilon, int m, double p_0m,
                            double p_step);

struct Theorem2Report {
    BoundReport headline;        // printed coefficients 1/8 and 5/8
    BoundReport appendix_exact;  // N = (delta/d) D_{d/2} from the closed forms
};

// Identical ladder clocks. The two variants disagree on the upper
// coefficient (5/8 printed vs 9/8 from the solved recurrence); both are
// reported and the notes flag the discrepancy.
Theorem2Report theorem2_bounds(int d, double delta);

// Perfect clock vs ladder clock, start z = 0:
//   (d+1)/(1-delta) <= D_0 <= (2d+1)/(1-delta),  N = D_0 / d.
BoundReport perfect_vs_ladder_bounds(int d, double delta);

} // namespace atclocks

#endif
