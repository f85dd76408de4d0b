#include "fibising/fermion_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "fibising/errors.hpp"
#include "fibising/fibword.hpp"

namespace fibising {

FermionMatrices build_matrices(const std::vector<double>& couplings) {
    const std::size_t n = couplings.size();
    if (n < 3) throw DomainError("fermion ring needs at least 3 sites, got " + std::to_string(n));
    FermionMatrices m;
    m.n = n;
    m.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.b = m.a;
    const auto N = static_cast<Eigen::Index>(n);
    for (Eigen::Index i = 0; i < N; ++i) m.a(i, i) = -2.0;
    for (Eigen::Index i = 0; i + 1 < N; ++i) {
        const double j = couplings[static_cast<std::size_t>(i)];
        m.a(i, i + 1) = m.a(i + 1, i) = -j;
        m.b(i, i + 1) = -j;
        m.b(i + 1, i) = j;
    }
    const double wrap = couplings.back();
    m.a(0, N - 1) = m.a(N - 1, 0) = -wrap;
    m.b(0, N - 1) = wrap;
    m.b(N - 1, 0) = -wrap;
    return m;
}

FermionMatrices build_matrices(const CouplingParams& params, int k) {
    if (k < 1 || fibonacci(k) < 3) {
        throw DomainError("fermion ring needs F_k >= 3 (k >= 3), got k = " + std::to_string(k));
    }
    return build_matrices(coupling_sequence(word_at_level(k), params));
}

OracleSpectrum oracle_spectrum(const FermionMatrices& m) {
    const Eigen::MatrixXd diff = m.a - m.b;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        std::ostringstream dump;
        dump << diff;
        throw NumericError("singular value decomposition did not converge for\n" + dump.str());
    }
    const Eigen::VectorXd& sigma = svd.singularValues();
    const auto n = static_cast<std::size_t>(sigma.size());
    // Singular values come out descending; report ascending.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::reverse(order.begin(), order.end());

    const double scale = sigma.size() > 0 ? sigma(0) * sigma(0) : 0.0;
    const double clamp = 1e-9 * scale;
    OracleSpectrum out;
    out.vectors.resize(diff.cols(), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = static_cast<Eigen::Index>(order[i]);
        double mu = sigma(src) * sigma(src);
        if (mu < clamp) mu = std::max(mu, 0.0);
        out.mu.push_back(mu);
        out.s_values.push_back(mu / 4.0);
        out.vectors.col(static_cast<Eigen::Index>(i)) = svd.matrixV().col(src);
    }
    return out;
}

double eigen_residual(const FermionMatrices& m, const OracleSpectrum& spec) {
    const Eigen::MatrixXd diff = m.a - m.b;
    const Eigen::MatrixXd gram = (m.a + m.b) * diff;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < spec.vectors.cols(); ++i) {
        const Eigen::VectorXd v = spec.vectors.col(i);
        const double r = (gram * v - spec.mu[static_cast<std::size_t>(i)] * v).norm() / v.norm();
        worst = std::max(worst, r);
    }
    return worst;
}

TransferMatrix direct_transfer_product(const CouplingParams& params, int k, SpectralVariable s) {
    const FibWord word = word_at_level(k);
    const std::vector<double> chain = coupling_sequence(word, params.dual());
    TransferMatrix product;
    for (double j : chain) product = product * single_site_matrix(j, s);
    return product;
}

ContainmentReport containment_check(const OracleSpectrum& spec, const BandSet& bands,
                                    double inflate) {
    if (!(inflate >= 0.0)) throw DomainError("inflation must be >= 0");
    ContainmentReport report;
    report.level = bands.level();
    report.inflate = inflate;
    report.total = spec.s_values.size();
    for (double s : spec.s_values) {
        if (bands.contains(s, inflate)) {
            ++report.inside;
        } else {
            report.violators.push_back(s);
        }
    }
    return report;
}

ContainmentReport containment_check(const CouplingParams& params, int k, double inflate,
                                    const ScanOptions& opts) {
    const FermionMatrices m = build_matrices(params.dual(), k);
    const OracleSpectrum spec = oracle_spectrum(m);
    const BandResult bands = band_set(params, k + 1, opts);
    return containment_check(spec, bands.bands, inflate);
}

}  // namespace fibising
