#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vtinv {

/// Mono PCM audio. Samples are kept as doubles in [-1, 1).
struct Audio {
  std::vector<double> samples;
  std::uint32_t sample_rate_hz = 16000;

  double duration_s() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// RIFF/WAVE PCM16 mono. Other encodings are rejected.
Audio parse_wav(std::string_view bytes);
/// Writes PCM16 mono; samples are scaled by 32768, rounded and clamped, so
/// parse_wav(write_wav(a)) reproduces any audio that came from parse_wav.
std::string write_wav(const Audio& audio);

Audio read_wav_file(const std::string& path);
void write_wav_file(const std::string& path, const Audio& audio);

}  // namespace vtinv
