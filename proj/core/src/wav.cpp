#include "vtinv/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vtinv/error.hpp"
#include "vtinv/text.hpp"

namespace vtinv {

namespace {

std::uint32_t read_u32(std::string_view b, std::size_t at) {
  if (at + 4 > b.size()) throw ParseError("truncated WAV header");
  const auto* p = reinterpret_cast<const unsigned char*>(b.data() + at);
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) throw ParseError("truncated WAV header");
  const auto* p = reinterpret_cast<const unsigned char*>(b.data() + at);
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Audio parse_wav(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
    throw ParseError("not a RIFF/WAVE file");
  }
  Audio audio;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string_view id = b.substr(pos, 4);
    const std::uint32_t size = read_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) throw ParseError("truncated WAV chunk");

    if (id == "fmt ") {
      const std::uint16_t format = read_u16(b, body);
      const std::uint16_t channels = read_u16(b, body + 2);
      audio.sample_rate_hz = read_u32(b, body + 4);
      const std::uint16_t bits = read_u16(b, body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ParseError("only PCM16 mono WAV is supported");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("WAV data chunk before fmt chunk");
      const std::size_t n = size / 2;
      audio.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(b, body + 2 * i));
        audio.samples[i] = static_cast<double>(raw) / 32768.0;
      }
      return audio;
    }
    pos = body + size + (size & 1u);
  }
  throw ParseError("WAV file has no data chunk");
}

std::string write_wav(const Audio& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32(out, 36 + data_bytes);
  out.append("WAVEfmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, audio.sample_rate_hz);
  put_u32(out, audio.sample_rate_hz * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.append("data");
  put_u32(out, data_bytes);
  for (double s : audio.samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

Audio read_wav_file(const std::string& path) {
  try {
    return parse_wav(text::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_wav_file(const std::string& path, const Audio& audio) {
  text::write_file(path, write_wav(audio));
}

}  // namespace vtinv
