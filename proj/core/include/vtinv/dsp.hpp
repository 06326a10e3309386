#pragma once

#include <span>

#include <Eigen/Core>

#include "vtinv/features.hpp"

namespace vtinv::dsp {

/// MFCC front-end settings. The 20 ms hop matches the 50 Hz contour rate so
/// one feature row lines up with one MRI frame.
struct MfccConfig {
  double sample_rate_hz = 16000.0;
  double window_s = 0.025;
  double hop_s = 0.020;
  int fft_size = 512;
  int n_mel_filters = 26;
  int n_ceps = 13;
  double preemphasis = 0.97;
  double mel_fmin_hz = 0.0;
  double mel_fmax_hz = 8000.0;
  double log_floor = 1e-10;

  int window_samples() const;
  /// Throws ContractError on inconsistent settings.
  void validate() const;
};

double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

struct MelFilterbank {
  Eigen::MatrixXd weights;     // n_mel x (fft_size/2 + 1)
  Eigen::VectorXd center_hz;   // frequency of each filter's peak bin
};

/// Triangular filters with peaks (value 1) at FFT bins nearest to centres
/// equally spaced on the mel scale between fmin and fmax.
MelFilterbank build_mel_filterbank(const MfccConfig& cfg);

/// Orthonormal DCT-II matrix (n x n): row k is s_k cos(pi k (2j+1) / 2n).
Eigen::MatrixXd dct_matrix(int n);

/// log(max(mel energy, log_floor)) for `n_frames` frames centred at
/// (t + 0.5) * hop. Audio is zero-padded where a window runs off either end.
Eigen::MatrixXd log_mel_energies(std::span<const double> audio, const MfccConfig& cfg,
                                 Eigen::Index n_frames);

/// Cepstral coefficients c0..c(n_ceps-1), one row per frame.
Eigen::MatrixXd extract_mfcc(std::span<const double> audio, const MfccConfig& cfg,
                             Eigen::Index n_frames);

/// Regression deltas over +-2 frames with edge replication.
Eigen::MatrixXd deltas(const Eigen::Ref<const Eigen::MatrixXd>& base);

/// [base | delta | delta-delta].
Eigen::MatrixXd add_deltas(const Eigen::Ref<const Eigen::MatrixXd>& base);

/// extract_mfcc followed by add_deltas, tagged mfcc39.
FeatureMatrix mfcc_features(std::span<const double> audio, const MfccConfig& cfg,
                            Eigen::Index n_frames);

}  // namespace vtinv::dsp
