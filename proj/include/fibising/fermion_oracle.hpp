#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fibising/band_set.hpp"
#include "fibising/params.hpp"
#include "fibising/spectrum.hpp"
#include "fibising/tracecore.hpp"

namespace fibising {

/// Quadratic-form matrices of the free-fermion ring on the level-k word:
/// A symmetric with diagonal -2, B antisymmetric, both nearest-neighbour plus
/// the wrap-around corner.
struct FermionMatrices {
    std::size_t n = 0;
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
};

/// Builds A and B from the coupling sequence of word(k). Throws DomainError
/// when F_k < 3 (the corner bond would coincide with a bulk bond).
FermionMatrices build_matrices(const CouplingParams& params, int k);

/// Same, for an explicit coupling sequence around the ring.
FermionMatrices build_matrices(const std::vector<double>& couplings);

struct OracleSpectrum {
    /// Eigenvalues of (A+B)(A-B), ascending (squared original energies).
    std::vector<double> mu;
    /// mu / 4 on the rescaled axis.
    std::vector<double> s_values;
    /// Right singular vectors of A - B, one column per entry of mu.
    Eigen::MatrixXd vectors;
};

/// Diagonalizes (A+B)(A-B) = (A-B)^T (A-B) through the singular values of
/// A - B; eigenvalues within roundoff of zero are clamped to 0.
OracleSpectrum oracle_spectrum(const FermionMatrices& m);

/// max_i ||(A-B)^T (A-B) v_i - mu_i v_i|| / ||v_i||.
double eigen_residual(const FermionMatrices& m, const OracleSpectrum& spec);

/// Ordered product of single-site matrices over the transfer chain of level k
/// (the Fibonacci word with couplings A -> J1, B -> J0), first site leftmost.
/// This ordering satisfies M_{k+1} = M_k M_{k-1}, and its half-trace is x_k(s).
TransferMatrix direct_transfer_product(const CouplingParams& params, int k, SpectralVariable s);

struct ContainmentReport {
    int level = 0;
    double inflate = 0.0;
    std::size_t total = 0;
    std::size_t inside = 0;
    std::vector<double> violators;

    double fraction() const {
        return total == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(total);
    }
};

/// Fraction of the oracle s-values of the F_k-site ring that fall inside the
/// band set whose edge function is x_k (band level k + 1), inflated by delta.
/// The ring is the transfer chain of level k, so both sides describe the same
/// coupling sequence.
ContainmentReport containment_check(const CouplingParams& params, int k, double inflate,
                                    const ScanOptions& opts = {});

/// Same, against a precomputed band set.
ContainmentReport containment_check(const OracleSpectrum& spec, const BandSet& bands,
                                    double inflate);

}  // namespace fibising
