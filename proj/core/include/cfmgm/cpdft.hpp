#pragma once
/**
 * @file cpdft.hpp
 * @brief Circulant-permutation DFT precoder bank and group combiners.
 *
 * The bank is U_n = W * Pi^{n-1} with W the unitary symmetric DFT and Pi
 * the cyclic column shift. Combiner F_g collects column g of every
 * precoder, so conj(F_g) * F_{g'}^T reduces to a diagonal matrix of
 * unit-modulus entries (the identity when g == g'). With the elementwise
 * channel-inverting equalizer this yields a combining gain of exactly N
 * for the own group and exact cancellation of every other group.
 */

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cfmgm {

struct PrecoderBank {
  int n = 0;
  std::vector<Eigen::MatrixXcd> precoders;  // U_1..U_N, each unitary
  std::vector<Eigen::MatrixXcd> combiners;  // F_1..F_N, F_g(:,n) = U_n(:,g)
};

/// Unitary symmetric DFT: entry (a, b) = exp(-j 2 pi a b / n) / sqrt(n).
Eigen::MatrixXcd dft_matrix(int n);

PrecoderBank build_precoder_bank(int n);

/// Derives the combiners from an explicit precoder list (fault-injection
/// and test hook).
PrecoderBank bank_from_precoders(std::vector<Eigen::MatrixXcd> precoders);

/// e~^T conj(F_g) F_{g'}^T h with e~ the elementwise reciprocal of h.
/// Equals n for g == g' and 0 otherwise, for any h with nonzero entries.
/// Group indices are 0-based. Throws on a zero channel entry.
std::complex<double> cancellation_check(const PrecoderBank& bank,
                                        const Eigen::VectorXcd& h, int g,
                                        int g_prime);

}  // namespace cfmgm
