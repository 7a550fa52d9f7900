#include "atclocks/quantum_verify.hpp"

#include "atclocks/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace atclocks {

namespace {

constexpr int kMaxStateDim = 64;

void require_desk_scale(int state_dim)
{
    if (state_dim > kMaxStateDim)
        throw std::invalid_argument("quantum_verify: state dimension too large for dense verification");
}

// Phi = tr_T o channel - identity, applied to a basis matrix |i><j|.
Eigen::MatrixXd phi_on_basis(const Eigen::MatrixXd& jump, int i, int j)
{
    const int dim = static_cast<int>(jump.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    if (i == j) {
        // Def. 3 reads only the diagonal of rho: no-tick mass spreads over
        // the forward targets, tick mass collapses onto state 0.
        for (int m = i; m < dim; ++m)
            out(m, m) += jump(i, m);
        for (int m = 0; m < i; ++m)
            out(0, 0) += jump(i, m);
    }
    out(i, j) -= 1.0;
    return out;
}

} // namespace

Eigen::MatrixXd full_jump_matrix(const JumpDistribution& jumps)
{
    const int dim = jumps.cycle_length() + 1;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int offset = 0; offset < dim; ++offset)
            p(i, (i + offset) % dim) = jumps.prob(offset);
    return p;
}

KrausSet::KrausSet(std::vector<KrausOperator> ops, int state_dim)
    : ops_(std::move(ops)), dim_(state_dim)
{
}

double KrausSet::completeness_residual() const
{
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const KrausOperator& op : ops_)
        sum += op.matrix.transpose() * op.matrix;
    return (sum - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd KrausSet::apply(const Eigen::MatrixXd& rho) const
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * dim_, 2 * dim_);
    for (const KrausOperator& op : ops_)
        out += op.matrix * rho * op.matrix.transpose();
    return out;
}

KrausSet build_kraus(const StochasticClock& clock)
{
    const int dim = clock.jumps.cycle_length() + 1;
    require_desk_scale(dim);
    const Eigen::MatrixXd p = full_jump_matrix(clock.jumps);

    std::vector<KrausOperator> ops;
    for (int i = 0; i < dim; ++i) {
        for (int m = 0; m < dim; ++m) {
            if (p(i, m) == 0.0)
                continue;
            KrausOperator op;
            op.source = i;
            op.target = m;
            op.tick = m < i; // wrap past state 0
            op.matrix = Eigen::MatrixXd::Zero(2 * dim, dim);
            const double amp = std::sqrt(p(i, m));
            if (op.tick)
                op.matrix(0 * 2 + 1, i) = amp; // |0>_C (x) |1>_T  <i|
            else
                op.matrix(m * 2 + 0, i) = amp; // |m>_C (x) |0>_T  <i|
            ops.push_back(std::move(op));
        }
    }
    KrausSet set(std::move(ops), dim);
    if (set.completeness_residual() > 1e-12)
        throw std::logic_error("build_kraus: completeness residual above tolerance");
    return set;
}

ChannelComparison apply_channel_two_ways(const StochasticClock& clock,
                                         const Eigen::MatrixXd& rho)
{
    const int dim = clock.jumps.cycle_length() + 1;
    require_desk_scale(dim);
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("apply_channel_two_ways: density matrix dimension mismatch");
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("apply_channel_two_ways: density matrix must have unit trace");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (rho + rho.transpose()),
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw std::invalid_argument("apply_channel_two_ways: density matrix must be positive semidefinite");
    }

    ChannelComparison cmp;
    cmp.via_kraus = build_kraus(clock).apply(rho);

    const Eigen::MatrixXd p = full_jump_matrix(clock.jumps);
    cmp.via_definition = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    for (int j = 0; j < dim; ++j) {
        const double weight = rho(j, j);
        for (int m = j; m < dim; ++m)
            cmp.via_definition(m * 2 + 0, m * 2 + 0) += weight * p(j, m); // no-tick
        for (int m = 0; m < j; ++m)
            cmp.via_definition(0 * 2 + 1, 0 * 2 + 1) += weight * p(j, m); // tick, reset to 0
    }

    cmp.max_entry_difference =
        (cmp.via_kraus - cmp.via_definition).cwiseAbs().maxCoeff();
    return cmp;
}

CertificatePair build_certificate(const StochasticClock& clock)
{
    const int dim = clock.jumps.cycle_length() + 1;
    require_desk_scale(dim);
    const Eigen::MatrixXd p = full_jump_matrix(clock.jumps);
    const int dim2 = dim * dim;

    CertificatePair pair;
    pair.choi = Eigen::MatrixXd::Zero(dim2, dim2);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const Eigen::MatrixXd block = phi_on_basis(p, i, j);
            // J(Phi) = sum Phi(|i><j|) (x) |i><j|_{C'}
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    if (block(a, b) != 0.0)
                        pair.choi(a * dim + i, b * dim + j) += block(a, b);
        }
    }

    pair.X = Eigen::MatrixXd::Zero(dim2, dim2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j)
                pair.X(i * dim + i, j * dim + j) = 1.0; // |i><j| (x) |i><j|
    for (int i = 0; i < dim; ++i)
        pair.X(i * dim + i, i * dim + i) = 1.0 - p(i, i);

    // Displayed dual feasible point: forward no-move-free branch plus the
    // tick branch collapsed onto state 0.
    pair.Z = Eigen::MatrixXd::Zero(dim2, dim2);
    for (int i = 0; i < dim; ++i) {
        for (int m = i + 1; m < dim; ++m)
            pair.Z(m * dim + i, m * dim + i) += p(i, m);
        for (int m = 0; m < i; ++m)
            pair.Z(0 * dim + i, 0 * dim + i) += p(i, m);
    }
    return pair;
}

CertificateReport verify_continuity_certificate(const CertificatePair& pair,
                                                const StochasticClock& clock,
                                                int trials,
                                                std::uint64_t seed)
{
    if (trials < 1)
        throw std::invalid_argument("verify_continuity_certificate: trials must be positive");

    const int dim = clock.jumps.cycle_length() + 1;
    const int dim2 = dim * dim;
    const Eigen::MatrixXd p = full_jump_matrix(clock.jumps);

    CertificateReport report;
    report.construction_residual =
        (pair.Z - pair.X - pair.choi).cwiseAbs().maxCoeff();

    // Random real unit vectors suffice: X and Z are real symmetric.
    RandomStream rng(seed, 0x43455254u);
    report.min_quadratic_form_X = std::numeric_limits<double>::infinity();
    report.min_quadratic_form_Z = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd v(dim2);
        for (int i = 0; i < dim2; ++i)
            v[i] = 2.0 * rng.next_uniform() - 1.0;
        const double norm = v.norm();
        if (norm == 0.0)
            continue;
        v /= norm;
        const double qx = v.dot(pair.X * v);
        const double qz = v.dot(pair.Z * v);
        if (qx < report.min_quadratic_form_X) {
            report.min_quadratic_form_X = qx;
            if (qx < -1e-10 && report.witness.empty()) {
                std::ostringstream os;
                os << "X quadratic form " << qx << " at trial " << t;
                report.witness = os.str();
            }
        }
        if (qz < report.min_quadratic_form_Z) {
            report.min_quadratic_form_Z = qz;
            if (qz < -1e-10 && report.witness.empty()) {
                std::ostringstream os;
                os << "Z quadratic form " << qz << " at trial " << t;
                report.witness = os.str();
            }
        }
    }

    // tr_C Z: trace over the first factor.
    Eigen::MatrixXd traced = Eigen::MatrixXd::Zero(dim, dim);
    for (int c = 0; c < dim; ++c)
        traced += pair.Z.block(c * dim, c * dim, dim, dim);

    report.partial_trace_offdiag = 0.0;
    report.partial_trace_entry_error = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (i == j)
                continue;
            report.partial_trace_offdiag =
                std::max(report.partial_trace_offdiag, std::abs(traced(i, j)));
        }
        const double err = std::abs(traced(i, i) - (1.0 - p(i, i)));
        if (err > report.partial_trace_entry_error) {
            report.partial_trace_entry_error = err;
            if (err > 1e-12 && report.witness.empty()) {
                std::ostringstream os;
                os << "tr_C Z entry " << i << " = " << traced(i, i)
                   << ", expected " << 1.0 - p(i, i);
                report.witness = os.str();
            }
        }
    }

    report.inf_norm = traced.diagonal().cwiseAbs().maxCoeff();
    report.epsilon_error = std::abs(report.inf_norm - epsilon_continuity(clock));

    report.ok = report.construction_residual <= 1e-12
             && report.min_quadratic_form_X >= -1e-10
             && report.min_quadratic_form_Z >= -1e-10
             && report.partial_trace_offdiag <= 1e-12
             && report.partial_trace_entry_error <= 1e-12
             && report.epsilon_error <= 1e-12;
    return report;
}

} // namespace atclocks
