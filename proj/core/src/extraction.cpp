// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsep/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "qsep/correlation.hpp"

namespace qsep {

namespace {

constexpr double kSupportTol = 1e-8;
constexpr double kZeroEigen = 1e-12;
constexpr double kAcceptResidual = 0.5;
/// Singular-value cut when summing two support subspaces. Directions shared or
/// owned by one support have values >= 1; tilts between nearly equal supports
/// have values of the order of the tilt.
constexpr double kSpanCut = 0.5;

CMatrix identity(Eigen::Index n) {
    return CMatrix::Identity(n, n);
}

CMatrix hermitize(const CMatrix &m) {
    return (m + m.adjoint()) / 2.0;
}

/// Projector onto the eigenvectors of a Hermitian matrix with eigenvalue above
/// `cut` (sign = +1) or below -cut (sign = -1).
CMatrix spectral_projector(const CMatrix &h, double cut, int sign) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h));
    CMatrix p = CMatrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        if (sign * es.eigenvalues()(i) > cut) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    return hermitize(p);
}

/// Observables and flips of one tilted-CHSH block of a strategy.
struct BlockOperators {
    CMatrix lo_A, hi_A;  // Alice's projections onto the two block levels
    CMatrix lo_B, hi_B;  // Bob's counterparts: ±1 eigenspaces of Z̃ on 𝓑
    CMatrix flip_A, flip_B;
};

BlockOperators block_operators(const Strategy &s, const BlockQuestions &q, const BlockParams &bp) {
    const Measurement &ax0 = s.at(Party::kAlice, q.x0);
    const Measurement &ax1 = s.at(Party::kAlice, q.x1);
    const Measurement &by0 = s.at(Party::kBob, q.y0);
    const Measurement &by1 = s.at(Party::kBob, q.y1);

    auto observable = [](const Measurement &m, Answer plus, Answer minus) {
        return std::pair{CMatrix(m.projector(plus) - m.projector(minus)), CMatrix(m.projector(plus) + m.projector(minus))};
    };
    const auto [a_x, one_ax] = observable(ax1, q.a_plus, q.a_minus);
    const auto [b_z, one_bz] = observable(by0, q.b_plus, q.b_minus);
    const auto [b_x, one_bx] = observable(by1, q.b_plus, q.b_minus);

    const CMatrix bz_u = unitarize(b_z, one_bz);
    const CMatrix bx_u = unitarize(b_x, one_bx);
    const CMatrix z_b = polar_fix(hermitize((bz_u + bx_u) / (2.0 * std::cos(bp.mu))));

    const std::array<CMatrix, 2> supports = {range_basis(one_bz), range_basis(one_bx)};
    const CMatrix one_b = projector_onto(span_basis(supports, kSpanCut), z_b.rows());
    const CMatrix z_tilde = one_b * z_b * one_b;

    BlockOperators out;
    out.lo_A = ax0.projector(q.a_plus);
    out.hi_A = ax0.projector(q.a_minus);
    out.lo_B = spectral_projector(z_tilde, 0.5, 1);
    out.hi_B = spectral_projector(z_tilde, 0.5, -1);
    out.flip_A = unitarize(a_x, one_ax);
    out.flip_B = polar_fix(hermitize((bz_u - bx_u) / (2.0 * std::sin(bp.mu))));
    return out;
}

void require_parity(Family family, std::size_t d) {
    if (family == Family::kManyAnswers) {
        if (d % 2 == 0 || d < 3) throw UnsupportedParityError("many-answers extraction requires odd d >= 3");
    } else if (family == Family::kManyQuestions) {
        if (d % 2 != 0 || d < 2) throw UnsupportedParityError("many-questions extraction requires even d >= 2");
    } else {
        throw ValidationError("extraction is defined for the many-answers and many-questions families");
    }
}

}  // namespace

CMatrix unitarize(const CMatrix &op, const CMatrix &support) {
    if (op.rows() != support.rows() || op.cols() != support.cols() || op.rows() != op.cols()) {
        throw ValidationError("unitarize: shape mismatch");
    }
    if (!is_projector(support, kSupportTol)) throw ValidationError("unitarize: support is not a projector");
    if (operator_norm(op - support * op * support) > kSupportTol) {
        throw ValidationError("unitarize: operator leaves its support");
    }
    if (operator_norm(op.adjoint() * op - support) > kSupportTol) {
        throw ValidationError("unitarize: operator is not unitary on its support");
    }
    return identity(op.rows()) - support + op;
}

CMatrix polar_fix(const CMatrix &op) {
    if (op.rows() != op.cols() || !is_hermitian(op, kStructuralTol)) {
        throw ValidationError("polar_fix: operator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(op));
    RVector signs = es.eigenvalues();
    for (Eigen::Index i = 0; i < signs.size(); ++i) signs(i) = (std::abs(signs(i)) < kZeroEigen || signs(i) > 0) ? 1.0 : -1.0;
    const CMatrix &v = es.eigenvectors();
    return v * signs.cast<Complex>().asDiagonal() * v.adjoint();
}

CMatrix reduced_density(const PureState &psi, Party party) {
    const CMatrix m = psi.as_matrix();
    if (party == Party::kAlice) return m * m.adjoint();
    return m.transpose() * m.conjugate();
}

std::vector<CMatrix> orthogonalize(std::span<const CMatrix> projectors, const CMatrix &rho) {
    struct Candidate {
        std::size_t owner;
        double weight;
        CVector v;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const CMatrix u = range_basis(projectors[i]);
        if (u.cols() == 0) continue;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(u.adjoint() * rho * u));
        const CMatrix w = u * es.eigenvectors();
        for (Eigen::Index k = 0; k < w.cols(); ++k) candidates.push_back({i, es.eigenvalues()(k), w.col(k)});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate &a, const Candidate &b) { return a.weight > b.weight; });

    const Eigen::Index n = rho.rows();
    CMatrix accepted_span(n, 0);
    std::vector<const Candidate *> accepted;
    for (const auto &c : candidates) {
        if (static_cast<Eigen::Index>(accepted.size()) == n) break;
        CVector r = c.v - accepted_span * (accepted_span.adjoint() * c.v);
        const double rn = r.norm();
        if (rn <= kAcceptResidual) continue;
        accepted_span.conservativeResize(n, accepted_span.cols() + 1);
        accepted_span.col(accepted_span.cols() - 1) = r / rn;
        accepted.push_back(&c);
    }

    CMatrix v(n, static_cast<Eigen::Index>(accepted.size()));
    for (std::size_t k = 0; k < accepted.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = accepted[k]->v;
    Eigen::SelfAdjointEigenSolver<CMatrix> gram(hermitize(v.adjoint() * v));
    const CMatrix sym = v * gram.operatorInverseSqrt();

    std::vector<CMatrix> out(projectors.size(), CMatrix::Zero(n, n));
    for (std::size_t k = 0; k < accepted.size(); ++k) {
        const CVector q = sym.col(static_cast<Eigen::Index>(k));
        out[accepted[k]->owner] += q * q.adjoint();
    }
    for (auto &q : out) q = hermitize(q);
    return out;
}

std::vector<CMatrix> orthogonalize(std::span<const CMatrix> projectors, const PureState &psi, Party party) {
    return orthogonalize(projectors, reduced_density(psi, party));
}

double overlap_weight(std::span<const CMatrix> projectors, const CMatrix &rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        for (std::size_t j = 0; j < projectors.size(); ++j) {
            if (i == j) continue;
            s += (projectors[i] * projectors[j] * projectors[i] * rho).trace().real();
        }
    }
    return s;
}

double replacement_weight(std::span<const CMatrix> p, std::span<const CMatrix> q, const CMatrix &rho) {
    if (p.size() != q.size()) throw ValidationError("replacement_weight: list sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const CMatrix diff = p[i] - q[i];
        s += (diff * diff * rho).trace().real();
    }
    return s;
}

ExtractionKit build_kit(const Strategy &strategy, Family family, const SchmidtState &state) {
    const std::size_t d = state.d();
    require_parity(family, d);
    if (strategy.family != Family::kGeneric && strategy.family != family) {
        throw ValidationError("build_kit: strategy belongs to the " + std::string(family_name(strategy.family)) +
                              " family");
    }
    const auto na = static_cast<Eigen::Index>(strategy.dim_a());
    const auto nb = static_cast<Eigen::Index>(strategy.dim_b());

    ExtractionKit kit;
    kit.d = d;
    kit.family = family;
    kit.P_A.assign(d, CMatrix());
    kit.P_B.assign(d, CMatrix());
    kit.flip_A.assign(d - 1, CMatrix());
    kit.flip_B.assign(d - 1, CMatrix());

    const std::size_t unprimed = family == Family::kManyAnswers ? (d - 1) / 2 : d / 2;
    const std::size_t primed = family == Family::kManyAnswers ? (d - 1) / 2 : d / 2 - 1;
    for (std::size_t m = 0; m < unprimed; ++m) {
        BlockOperators ops = block_operators(strategy, block_questions(family, m, false), block_params(state, m, false));
        kit.P_A[2 * m] = std::move(ops.lo_A);
        kit.P_A[2 * m + 1] = std::move(ops.hi_A);
        kit.P_B[2 * m] = std::move(ops.lo_B);
        kit.P_B[2 * m + 1] = std::move(ops.hi_B);
        kit.flip_A[2 * m] = std::move(ops.flip_A);
        kit.flip_B[2 * m] = std::move(ops.flip_B);
    }
    for (std::size_t m = 0; m < primed; ++m) {
        BlockOperators ops = block_operators(strategy, block_questions(family, m, true), block_params(state, m, true));
        kit.flip_A[2 * m + 1] = std::move(ops.flip_A);
        kit.flip_B[2 * m + 1] = std::move(ops.flip_B);
    }
    if (family == Family::kManyAnswers) {
        const auto last = static_cast<Answer>(d - 1);
        kit.P_A[d - 1] = strategy.at(Party::kAlice, Question::index(0)).projector(last);
        kit.P_B[d - 1] = strategy.at(Party::kBob, Question::index(0)).projector(last);
    }

    kit.chainX_A = {identity(na)};
    kit.chainX_B = {identity(nb)};
    for (std::size_t k = 1; k < d; ++k) {
        kit.chainX_A.push_back(kit.chainX_A.back() * kit.flip_A[k - 1]);
        kit.chainX_B.push_back(kit.chainX_B.back() * kit.flip_B[k - 1]);
    }

    kit.Q_A = orthogonalize(kit.P_A, strategy.state, Party::kAlice);
    kit.Q_B = orthogonalize(kit.P_B, strategy.state, Party::kBob);
    kit.omega = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(d));
    auto clock = [&](const std::vector<CMatrix> &q, Eigen::Index n) {
        CMatrix z = identity(n);
        for (std::size_t k = 0; k < d; ++k) z += (std::pow(kit.omega, static_cast<double>(k)) - 1.0) * q[k];
        return z;
    };
    kit.Z_A = clock(kit.Q_A, na);
    kit.Z_B = clock(kit.Q_B, nb);
    return kit;
}

ExtractionKit build_kit(const Strategy &strategy) {
    if (strategy.target.empty()) throw ValidationError("build_kit: strategy carries no target state");
    return build_kit(strategy, strategy.family, SchmidtState(strategy.target));
}

ResidualReport yn_residuals(const ExtractionKit &kit, const PureState &psi, const SchmidtState &c) {
    return yn_residuals(kit, psi, std::span<const double>(c.c()));
}

ResidualReport yn_residuals(const ExtractionKit &kit, const PureState &psi, std::span<const double> c) {
    if (c.size() != kit.d || kit.P_A.size() != kit.d || kit.P_B.size() != kit.d) {
        throw ValidationError("yn_residuals: kit and coefficient sizes differ");
    }
    if (!(c[0] > 0.0)) throw ValidationError("yn_residuals: c_0 must be positive");
    const CMatrix m = psi.as_matrix();
    if (m.rows() != kit.P_A[0].rows() || m.cols() != kit.P_B[0].rows()) {
        throw ValidationError("yn_residuals: kit dimensions differ from the state");
    }
    // Coefficient-matrix action: (A ⊗ B)ψ ↦ A M Bᵀ.
    std::vector<CMatrix> pa;
    for (const auto &p : kit.P_A) pa.push_back(p * m);

    ResidualReport r;
    CMatrix sum = -m;
    for (std::size_t i = 0; i < kit.d; ++i) {
        for (std::size_t j = 0; j < kit.d; ++j) {
            if (i != j) r.eps[0] = std::max(r.eps[0], (kit.P_A[i] * pa[j]).norm());
        }
        sum += pa[i];
        r.eps[2] = std::max(r.eps[2], (pa[i] - m * kit.P_B[i].transpose()).norm());
        const CMatrix flipped = kit.chainX_A[i] * pa[i] * kit.chainX_B[i].transpose();
        r.eps[3] = std::max(r.eps[3], (flipped - (c[i] / c[0]) * pa[0]).norm());
    }
    r.eps[1] = sum.norm();
    r.overall = *std::max_element(r.eps.begin(), r.eps.end());
    return r;
}

SwapResult swap_isometry(const ExtractionKit &kit, const PureState &psi, const SchmidtState &c,
                         const ResourceLimits &limits) {
    const std::size_t d = kit.d;
    if (c.d() != d) throw ValidationError("swap_isometry: coefficient count differs from the kit");
    const CMatrix m = psi.as_matrix();
    const Eigen::Index na = m.rows(), nb = m.cols();
    if (na != kit.Z_A.rows() || nb != kit.Z_B.rows()) throw ValidationError("swap_isometry: kit dimensions differ");
    limits.check(static_cast<std::size_t>(na * nb) * d * d, "swap isometry output");

    const auto dd = static_cast<Eigen::Index>(d);
    auto idx = [dd](Eigen::Index k, Eigen::Index kp) { return static_cast<std::size_t>(k * dd + kp); };
    // Ancilla-indexed blocks T[k][k'] of coefficient matrices on A ⊗ B.
    std::vector<CMatrix> t(d * d);

    // F on both ancillas maps |00> to (1/d) Σ_{k,k'} |k k'>; then the controlled clocks.
    std::vector<CMatrix> za(d), zb_t(d);
    za[0] = identity(na);
    zb_t[0] = identity(nb);
    for (std::size_t k = 1; k < d; ++k) {
        za[k] = kit.Z_A * za[k - 1];
        zb_t[k] = zb_t[k - 1] * kit.Z_B.transpose();
    }
    for (Eigen::Index k = 0; k < dd; ++k) {
        const CMatrix left = za[static_cast<std::size_t>(k)] * m / static_cast<double>(d);
        for (Eigen::Index kp = 0; kp < dd; ++kp) t[idx(k, kp)] = left * zb_t[static_cast<std::size_t>(kp)];
    }

    // Inverse Fourier transform on each ancilla: |k> ↦ (1/√d) Σ_l ω^{-lk} |l>.
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    auto phase = [&](Eigen::Index l, Eigen::Index k) {
        return std::polar(scale, -2.0 * std::numbers::pi * static_cast<double>((l * k) % dd) / static_cast<double>(d));
    };
    std::vector<CMatrix> u(d * d, CMatrix::Zero(na, nb));
    for (Eigen::Index l = 0; l < dd; ++l)
        for (Eigen::Index kp = 0; kp < dd; ++kp)
            for (Eigen::Index k = 0; k < dd; ++k) u[idx(l, kp)] += phase(l, k) * t[idx(k, kp)];
    for (auto &x : t) x.setZero();
    for (Eigen::Index l = 0; l < dd; ++l)
        for (Eigen::Index lp = 0; lp < dd; ++lp)
            for (Eigen::Index kp = 0; kp < dd; ++kp) t[idx(l, lp)] += phase(lp, kp) * u[idx(l, kp)];

    // Controlled chain unitaries, then comparison with junk ⊗ Σ_j c_j |jj>.
    const CMatrix junk = kit.Q_A[0] * m / c[0];
    double err2 = 0.0;
    CVector out(static_cast<Eigen::Index>(na * nb) * dd * dd);
    for (Eigen::Index l = 0; l < dd; ++l) {
        for (Eigen::Index lp = 0; lp < dd; ++lp) {
            const auto ul = static_cast<std::size_t>(l), ulp = static_cast<std::size_t>(lp);
            const CMatrix block = kit.chainX_A[ul] * t[idx(l, lp)] * kit.chainX_B[ulp].transpose();
            const CMatrix target = l == lp ? CMatrix(c[ul] * junk) : CMatrix::Zero(na, nb);
            err2 += (block - target).squaredNorm();
            for (Eigen::Index a = 0; a < na; ++a)
                for (Eigen::Index b = 0; b < nb; ++b) out(((a * nb + b) * dd + l) * dd + lp) = block(a, b);
        }
    }

    SwapResult r;
    const double norm = out.norm();
    r.output = PureState({static_cast<std::size_t>(na), static_cast<std::size_t>(nb), d, d}, out / norm);
    r.junk = Eigen::Map<const CVector>(CMatrix(junk.transpose()).data(), na * nb);
    r.error = std::sqrt(err2);
    r.output_norm = norm;
    return r;
}

std::string kit_to_json(const ExtractionKit &kit) {
    using nlohmann::json;
    auto list = [](const std::vector<CMatrix> &ms) {
        json arr = json::array();
        for (const auto &m : ms) arr.push_back(jsonio::matrix_to_json(m));
        return arr;
    };
    json j;
    j["format"] = "qsep.kit/1";
    j["d"] = kit.d;
    j["family"] = std::string(family_name(kit.family));
    j["omega"] = jsonio::complex_to_json(kit.omega);
    j["P_A"] = list(kit.P_A);
    j["P_B"] = list(kit.P_B);
    j["Q_A"] = list(kit.Q_A);
    j["Q_B"] = list(kit.Q_B);
    j["chainX_A"] = list(kit.chainX_A);
    j["chainX_B"] = list(kit.chainX_B);
    j["Z_A"] = jsonio::matrix_to_json(kit.Z_A);
    j["Z_B"] = jsonio::matrix_to_json(kit.Z_B);
    return j.dump(1);
}

}  // namespace qsep
