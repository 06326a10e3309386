#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "vtinv/dsp.hpp"
#include "vtinv/error.hpp"

namespace vtinv::dsp {

int MfccConfig::window_samples() const {
  return static_cast<int>(std::lround(window_s * sample_rate_hz));
}

void MfccConfig::validate() const {
  if (!(sample_rate_hz > 0.0) || !(window_s > 0.0) || !(hop_s > 0.0)) {
    throw ContractError("mfcc: sample rate, window and hop must be positive");
  }
  if (fft_size < window_samples()) throw ContractError("mfcc: fft_size smaller than the window");
  if ((fft_size & (fft_size - 1)) != 0) throw ContractError("mfcc: fft_size must be a power of two");
  if (n_mel_filters < 1 || n_ceps < 1 || n_ceps > n_mel_filters) {
    throw ContractError("mfcc: need 1 <= n_ceps <= n_mel_filters");
  }
  if (mel_fmax_hz > sample_rate_hz / 2.0) {
    throw ContractError("mfcc: mel_fmax_hz exceeds the Nyquist frequency");
  }
  if (!(mel_fmin_hz >= 0.0 && mel_fmin_hz < mel_fmax_hz)) {
    throw ContractError("mfcc: need 0 <= mel_fmin_hz < mel_fmax_hz");
  }
  if (!(log_floor > 0.0)) throw ContractError("mfcc: log_floor must be positive");
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_mel_filterbank(const MfccConfig& cfg) {
  cfg.validate();
  const int n_bins = cfg.fft_size / 2 + 1;
  const int n_mel = cfg.n_mel_filters;
  const double mel_lo = hz_to_mel(cfg.mel_fmin_hz);
  const double mel_hi = hz_to_mel(cfg.mel_fmax_hz);

  std::vector<int> bin(static_cast<std::size_t>(n_mel + 2));
  for (int m = 0; m < n_mel + 2; ++m) {
    const double mel = mel_lo + (mel_hi - mel_lo) * m / (n_mel + 1);
    bin[static_cast<std::size_t>(m)] =
        static_cast<int>(std::lround(mel_to_hz(mel) * cfg.fft_size / cfg.sample_rate_hz));
  }

  MelFilterbank fb;
  fb.weights = Eigen::MatrixXd::Zero(n_mel, n_bins);
  fb.center_hz.resize(n_mel);
  for (int m = 0; m < n_mel; ++m) {
    const int left = bin[static_cast<std::size_t>(m)];
    const int center = bin[static_cast<std::size_t>(m) + 1];
    const int right = bin[static_cast<std::size_t>(m) + 2];
    if (!(left < center && center < right)) {
      throw ContractError("mfcc: mel filter " + std::to_string(m) +
                          " collapses onto too few FFT bins; use fewer filters or a larger FFT");
    }
    for (int k = left; k <= center; ++k) fb.weights(m, k) = double(k - left) / (center - left);
    for (int k = center; k < right; ++k) fb.weights(m, k) = double(right - k) / (right - center);
    fb.center_hz[m] = center * cfg.sample_rate_hz / cfg.fft_size;
  }
  return fb;
}

Eigen::MatrixXd dct_matrix(int n) {
  Eigen::MatrixXd d(n, n);
  const double s0 = std::sqrt(1.0 / n);
  const double sk = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      d(k, j) = (k == 0 ? s0 : sk) * std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * n));
    }
  }
  return d;
}

Eigen::MatrixXd log_mel_energies(std::span<const double> audio, const MfccConfig& cfg,
                                 Eigen::Index n_frames) {
  if (audio.empty()) throw ContractError("extract_mfcc: empty audio");
  if (n_frames < 0) throw ContractError("extract_mfcc: negative frame count");
  const MelFilterbank fb = build_mel_filterbank(cfg);

  const int win = cfg.window_samples();
  const int n_fft = cfg.fft_size;
  const auto n = static_cast<std::ptrdiff_t>(audio.size());

  std::vector<double> emphasized(audio.size());
  emphasized[0] = audio[0];
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    emphasized[static_cast<std::size_t>(i)] =
        audio[static_cast<std::size_t>(i)] - cfg.preemphasis * audio[static_cast<std::size_t>(i - 1)];
  }

  std::vector<double> hamming(static_cast<std::size_t>(win));
  for (int i = 0; i < win; ++i) {
    hamming[static_cast<std::size_t>(i)] =
        win == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (win - 1));
  }

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(static_cast<std::size_t>(n_fft), 0.0);
  std::vector<std::complex<double>> spectrum;
  Eigen::VectorXd power(n_fft / 2 + 1);

  Eigen::MatrixXd out(n_frames, cfg.n_mel_filters);
  const double hop_samples = cfg.hop_s * cfg.sample_rate_hz;
  for (Eigen::Index t = 0; t < n_frames; ++t) {
    const auto center = static_cast<std::ptrdiff_t>(std::llround((t + 0.5) * hop_samples));
    const std::ptrdiff_t start = center - win / 2;
    std::fill(frame.begin(), frame.end(), 0.0);
    for (int i = 0; i < win; ++i) {
      const std::ptrdiff_t s = start + i;
      if (s >= 0 && s < n) {
        frame[static_cast<std::size_t>(i)] =
            emphasized[static_cast<std::size_t>(s)] * hamming[static_cast<std::size_t>(i)];
      }
    }
    fft.fwd(spectrum, frame);
    for (int k = 0; k <= n_fft / 2; ++k) power[k] = std::norm(spectrum[static_cast<std::size_t>(k)]);
    const Eigen::VectorXd energies = fb.weights * power;
    out.row(t) = energies.array().max(cfg.log_floor).log().transpose();
  }
  return out;
}

Eigen::MatrixXd extract_mfcc(std::span<const double> audio, const MfccConfig& cfg,
                             Eigen::Index n_frames) {
  const Eigen::MatrixXd log_mel = log_mel_energies(audio, cfg, n_frames);
  const Eigen::MatrixXd dct = dct_matrix(cfg.n_mel_filters).topRows(cfg.n_ceps);
  // Row-by-row so every frame goes through the same arithmetic; a blocked
  // matrix product treats tail rows differently and breaks exact equality of
  // identical input frames.
  Eigen::MatrixXd out(log_mel.rows(), cfg.n_ceps);
  for (Eigen::Index t = 0; t < log_mel.rows(); ++t) {
    out.row(t).noalias() = (dct * log_mel.row(t).transpose()).transpose();
  }
  return out;
}

FeatureMatrix mfcc_features(std::span<const double> audio, const MfccConfig& cfg,
                            Eigen::Index n_frames) {
  return {add_deltas(extract_mfcc(audio, cfg, n_frames)), FeatureKind::mfcc39};
}

}  // namespace vtinv::dsp
