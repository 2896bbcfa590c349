#include "cfmgm/cpdft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cfmgm {

Eigen::MatrixXcd dft_matrix(int n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
  Eigen::MatrixXcd w(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // Reduce the exponent mod n so phases stay in [0, 2pi).
      const int e = (a * b) % n;
      w(a, b) =
          std::polar(scale, -2.0 * std::numbers::pi * static_cast<double>(e) /
                                static_cast<double>(n));
    }
  }
  return w;
}

PrecoderBank bank_from_precoders(std::vector<Eigen::MatrixXcd> precoders) {
  if (precoders.empty()) {
    throw std::invalid_argument("bank_from_precoders: empty precoder list");
  }
  const int n = static_cast<int>(precoders.size());
  for (const auto& u : precoders) {
    if (u.rows() != n || u.cols() != n) {
      throw std::invalid_argument("bank_from_precoders: precoders must be NxN");
    }
  }
  PrecoderBank bank;
  bank.n = n;
  bank.precoders = std::move(precoders);
  bank.combiners.reserve(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    Eigen::MatrixXcd f(n, n);
    for (int slot = 0; slot < n; ++slot) {
      f.col(slot) = bank.precoders[static_cast<std::size_t>(slot)].col(g);
    }
    bank.combiners.push_back(std::move(f));
  }
  return bank;
}

PrecoderBank build_precoder_bank(int n) {
  if (n < 1) throw std::invalid_argument("build_precoder_bank: n must be >= 1");
  const Eigen::MatrixXcd w = dft_matrix(n);
  std::vector<Eigen::MatrixXcd> precoders;
  precoders.reserve(static_cast<std::size_t>(n));
  for (int shift = 0; shift < n; ++shift) {
    Eigen::MatrixXcd u(n, n);
    for (int g = 0; g < n; ++g) {
      u.col(g) = w.col((g + shift) % n);
    }
    precoders.push_back(std::move(u));
  }
  return bank_from_precoders(std::move(precoders));
}

std::complex<double> cancellation_check(const PrecoderBank& bank,
                                        const Eigen::VectorXcd& h, int g,
                                        int g_prime) {
  if (h.size() != bank.n) {
    throw std::invalid_argument("cancellation_check: channel length mismatch");
  }
  if (g < 0 || g >= bank.n || g_prime < 0 || g_prime >= bank.n) {
    throw std::out_of_range("cancellation_check: group index out of range");
  }
  for (int i = 0; i < h.size(); ++i) {
    if (h(i) == std::complex<double>(0.0, 0.0)) {
      throw std::invalid_argument(
          "cancellation_check: equalizer undefined for a zero channel entry");
    }
  }
  const Eigen::VectorXcd equalizer = h.cwiseInverse();
  const Eigen::VectorXcd projected =
      bank.combiners[static_cast<std::size_t>(g)].conjugate() *
      (bank.combiners[static_cast<std::size_t>(g_prime)].transpose() * h);
  return (equalizer.array() * projected.array()).sum();
}

}  // namespace cfmgm
