#include "atclocks/walk_analysis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace atclocks {

DeltaDistribution::DeltaDistribution(int max_offset, Eigen::VectorXd probs)
    : m_(max_offset), probs_(std::move(probs))
{
    if (m_ < 0)
        throw std::invalid_argument("DeltaDistribution: max offset must be non-negative");
    if (probs_.size() != 2 * m_ + 1)
        throw std::invalid_argument("DeltaDistribution: probs must have 2m + 1 entries");
    double sum = 0.0;
    for (int i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] >= 0.0 && probs_[i] <= 1.0))
            throw std::invalid_argument("DeltaDistribution: probabilities must lie in [0, 1]");
        sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
        throw std::invalid_argument("DeltaDistribution: probabilities must sum to 1");

    symmetric_ = true;
    for (int k = 1; k <= m_; ++k)
        if (std::abs(prob(k) - prob(-k)) > kNormalizationTolerance)
            symmetric_ = false;
}

double DeltaDistribution::second_moment() const
{
    double s = 0.0;
    for (int k = -m_; k <= m_; ++k)
        s += static_cast<double>(k) * k * prob(k);
    return s;
}

DeltaDistribution delta_distribution(const JumpDistribution& a,
                                     const JumpDistribution& b)
{
    if (a.cycle_length() != b.cycle_length())
        throw std::invalid_argument("delta_distribution: dimension mismatch");

    const int m = std::max(a.max_offset(), b.max_offset());
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(2 * m + 1);
    for (int ka = 0; ka <= a.max_offset(); ++ka)
        for (int kb = 0; kb <= b.max_offset(); ++kb)
            probs[ka - kb + m] += a.prob(ka) * b.prob(kb);
    return DeltaDistribution(m, std::move(probs));
}

void AbsorptionProblem::validate() const
{
    if (!(lower_boundary < start && start < upper_boundary))
        throw std::invalid_argument("AbsorptionProblem: start must lie strictly between the boundaries");
}

Eigen::VectorXd solve_expected_absorption_profile(const DeltaDistribution& delta,
                                                  long lower_boundary,
                                                  long upper_boundary)
{
    const long n = upper_boundary - lower_boundary - 1;
    if (n < 1)
        throw std::invalid_argument("solve_expected_absorption_profile: empty interior");

    if (delta.prob(0) >= 1.0)
        return Eigen::VectorXd::Constant(n, kInfiniteExpectation);

    const int m = delta.max_offset();
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
    for (long i = 0; i < n; ++i) {
        system(i, i) = 1.0 - delta.prob(0);
        for (int k = -m; k <= m; ++k) {
            if (k == 0)
                continue;
            const long j = i + k;
            if (j >= 0 && j < n)
                system(i, j) -= delta.prob(k);
            // beyond a boundary: absorbed, D = 0, no term
        }
    }
    return Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(rhs);
}

double solve_expected_absorption(const AbsorptionProblem& problem)
{
    problem.validate();
    const Eigen::VectorXd profile = solve_expected_absorption_profile(
        problem.delta, problem.lower_boundary, problem.upper_boundary);
    return profile[problem.start - problem.lower_boundary - 1];
}

double closed_form_D(int d, double z, const DeltaDistribution& delta,
                     BoundaryPair boundary)
{
    if (!delta.symmetric())
        throw std::invalid_argument("closed_form_D: requires a symmetric Delta distribution");
    const double second = delta.second_moment();
    if (second <= 0.0)
        return kInfiniteExpectation;

    const double dd = static_cast<double>(d);
    const double numerator = boundary == BoundaryPair::necessary
        ? dd + 1.0 + dd * z - z * z
        : 2.0 * dd * dd + 3.0 * dd + 1.0 + dd * z - z * z;
    // The particular solution of D_z = 1 + sum_k p_k D_{z+k} is -z^2 / E(Delta^2);
    // the numerators are the quadratics vanishing at the two boundary points.
    return numerator / second;
}

const char* to_string(BoundVariant variant)
{
    switch (variant) {
    case BoundVariant::eq5_general: return "eq5_general";
    case BoundVariant::theorem1: return "theorem1";
    case BoundVariant::theorem2_headline: return "theorem2_headline";
    case BoundVariant::theorem2_appendix_exact: return "theorem2_appendix_exact";
    case BoundVariant::perfect_vs_ladder: return "perfect_vs_ladder";
    }
    return "unknown";
}

BoundReport bound_eq5(int d, const DeltaDistribution& delta)
{
    BoundReport report;
    report.d = d;
    report.variant = BoundVariant::eq5_general;
    const double z = static_cast<double>(d) / 2.0;
    report.D_lower = closed_form_D(d, z, delta, BoundaryPair::necessary);
    report.D_upper = closed_form_D(d, z, delta, BoundaryPair::sufficient);
    report.N_lower = std::numeric_limits<double>::quiet_NaN();
    report.N_upper = std::numeric_limits<double>::quiet_NaN();
    report.notes = "N undetermined: E(Y) is not a function of the Delta distribution";
    return report;
}

BoundReport theorem1_bounds(int d, double epsilon, int m, double p_0m,
                            double p_step)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("theorem1_bounds: epsilon must lie in (0, 1)");
    if (!(p_0m > 0.0))
        throw std::invalid_argument("theorem1_bounds: p_0m must be positive");
    if (m < 1 || m > d)
        throw std::invalid_argument("theorem1_bounds: m must lie in [1, d]");

    const double dd = static_cast<double>(d);
    BoundReport report;
    report.d = d;
    report.variant = BoundVariant::theorem1;
    report.N_lower = (dd + 4.0 + 4.0 / dd) * p_step
                   / (4.0 * m * m * epsilon * (2.0 - epsilon));
    report.N_upper = (9.0 * dd / 4.0 + 3.0 + 1.0 / dd)
                   / (2.0 * (1.0 - epsilon) * m * p_0m);
    report.D_lower = std::numeric_limits<double>::quiet_NaN();
    report.D_upper = std::numeric_limits<double>::quiet_NaN();
    report.notes = "loose envelope over all clocks with the given (epsilon, m, p_0m, p_step)";
    return report;
}

namespace {

DeltaDistribution ladder_delta(double delta)
{
    Eigen::VectorXd probs(3);
    const double p = delta * (1.0 - delta);
    probs << p, 1.0 - 2.0 * p, p;
    return DeltaDistribution(1, std::move(probs));
}

} // namespace

Theorem2Report theorem2_bounds(int d, double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("theorem2_bounds: delta must lie in (0, 1)");

    const double dd = static_cast<double>(d);
    Theorem2Report result;

    result.headline.d = d;
    result.headline.variant = BoundVariant::theorem2_headline;
    result.headline.N_lower = (dd / 8.0 + 0.5) / (1.0 - delta);
    result.headline.N_upper = (5.0 * dd / 8.0 + 1.5) / (1.0 - delta);
    result.headline.D_lower = result.headline.N_lower * dd / delta;
    result.headline.D_upper = result.headline.N_upper * dd / delta;
    result.headline.notes =
        "printed coefficients (1/8, 5/8); the upper one disagrees with the "
        "appendix-exact value (9/8), see theorem2_appendix_exact";

    const DeltaDistribution dist = ladder_delta(delta);
    const double z = dd / 2.0;
    result.appendix_exact.d = d;
    result.appendix_exact.variant = BoundVariant::theorem2_appendix_exact;
    result.appendix_exact.D_lower = closed_form_D(d, z, dist, BoundaryPair::necessary);
    result.appendix_exact.D_upper = closed_form_D(d, z, dist, BoundaryPair::sufficient);
    result.appendix_exact.N_lower = delta / dd * result.appendix_exact.D_lower;
    result.appendix_exact.N_upper = delta / dd * result.appendix_exact.D_upper;
    result.appendix_exact.notes =
        "N = (delta/d) D_{d/2} with exact lower-order terms; upper d-coefficient 9/8";
    return result;
}

BoundReport perfect_vs_ladder_bounds(int d, double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("perfect_vs_ladder_bounds: delta must lie in (0, 1)");

    const double dd = static_cast<double>(d);
    BoundReport report;
    report.d = d;
    report.variant = BoundVariant::perfect_vs_ladder;
    report.D_lower = (dd + 1.0) / (1.0 - delta);
    report.D_upper = (2.0 * dd + 1.0) / (1.0 - delta);
    report.N_lower = report.D_lower / dd;
    report.N_upper = report.D_upper / dd;
    report.notes = "perfect clock vs ladder clock, start z = 0";
    return report;
}

} // namespace atclocks
