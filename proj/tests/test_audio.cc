// tests/test_audio.cc

// Audio frontend checks against naive DFT and mel-scale oracles that are
// reimplemented here, independently of the library code.

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "sas/audio.h"
#include "sas/mel_io.h"
#include "sas/wav_io.h"

using sas::AudioConfig;
using sas::Mat;
using sas::MelSpectrogram;
using sas::Waveform;

namespace {

constexpr double kPi = 3.14159265358979323846;

Waveform sine(double freq, double seconds, double amp, int sr) {
  Waveform w;
  w.sample_rate = sr;
  auto n = static_cast<size_t>(seconds * sr);
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(i) / sr);
  return w;
}

double oracle_hz_to_mel(double f) {
  return 2595.0 * std::log10(1.0 + f / 700.0);
}
double oracle_mel_to_hz(double m) {
  return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
}

// Independent re-creation of reflect padding for the frame oracle.
double padded_sample(const std::vector<double>& x, long i) {
  long n = static_cast<long>(x.size());
  long period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  if (i >= n) i = period - i;
  return x[static_cast<size_t>(i)];
}

// Naive DFT of analysis frame t, then mel projection: the full pipeline for
// one frame without any library calls except the filterbank under test.
Eigen::VectorXd oracle_frame_logmel(const std::vector<double>& samples, int t,
                                    const AudioConfig& c, const Mat& fb) {
  std::vector<double> frame(static_cast<size_t>(c.fft_size), 0.0);
  int offset = (c.fft_size - c.win_length) / 2;
  long start = static_cast<long>(t) * c.hop_length - c.fft_size / 2;
  for (int i = 0; i < c.fft_size; ++i) {
    double w = 0.0;
    if (i >= offset && i < offset + c.win_length)
      w = 0.5 - 0.5 * std::cos(2.0 * kPi * (i - offset) / c.win_length);
    frame[static_cast<size_t>(i)] = w * padded_sample(samples, start + i);
  }
  Eigen::VectorXd mag(c.fft_size / 2 + 1);
  for (int k = 0; k <= c.fft_size / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < c.fft_size; ++i) {
      double ang = -2.0 * kPi * k * i / c.fft_size;
      acc += frame[static_cast<size_t>(i)] *
             std::complex<double>(std::cos(ang), std::sin(ang));
    }
    mag(k) = std::abs(acc);
  }
  Eigen::VectorXd mel = fb * mag;
  for (int m = 0; m < c.n_mels; ++m)
    mel(m) = std::log(std::max(mel(m), c.log_floor));
  return mel;
}

}  // namespace

TEST_CASE("filterbank shape and row properties") {
  AudioConfig c;
  Mat fb = sas::build_mel_filterbank(c);
  CHECK(fb.rows() == 80);
  CHECK(fb.cols() == 513);
  double prev_center = -1.0;
  for (int m = 0; m < c.n_mels; ++m) {
    CHECK(fb.row(m).minCoeff() >= 0.0);
    CHECK(fb.row(m).sum() > 0.0);
    double center = sas::mel_filter_center_hz(c, m);
    CHECK(center > prev_center);
    prev_center = center;
  }
}

TEST_CASE("filterbank centers match the mel-scale formula") {
  AudioConfig c;
  c.n_mels = 10;
  c.fmin = 0.0;
  c.fmax = 8000.0;
  double lo = oracle_hz_to_mel(0.0), hi = oracle_hz_to_mel(8000.0);
  Mat fb = sas::build_mel_filterbank(c);
  for (int k = 0; k < 10; ++k) {
    double want = oracle_mel_to_hz(lo + (hi - lo) * (k + 1) / 11.0);
    CHECK(sas::mel_filter_center_hz(c, k) ==
          doctest::Approx(want).epsilon(1e-12));
    // the filter's strongest bin sits next to its center frequency
    int argmax = 0;
    fb.row(k).maxCoeff(&argmax);
    double bin_hz = static_cast<double>(argmax) * c.sample_rate / c.fft_size;
    double bin_width = static_cast<double>(c.sample_rate) / c.fft_size;
    CHECK(std::abs(bin_hz - want) <= bin_width);
  }
}

TEST_CASE("silence maps to the log floor") {
  AudioConfig c;
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(16000, 0.0);
  MelSpectrogram mel = sas::waveform_to_logmel(w, c);
  CHECK(mel.frames.rows() == 81);
  CHECK((mel.frames.array() == std::log(1e-5)).all());
}

TEST_CASE("frame count matches the sliding-window oracle") {
  AudioConfig c;
  for (size_t len : {1u, 199u, 200u, 201u, 999u, 16000u, 16001u}) {
    Waveform w;
    w.sample_rate = 16000;
    w.samples.assign(len, 0.01);
    // windows of fft_size sliding by hop over the reflect-padded signal
    size_t padded = len + static_cast<size_t>(c.fft_size);
    int oracle = 0;
    for (size_t start = 0; start + static_cast<size_t>(c.fft_size) <= padded;
         start += static_cast<size_t>(c.hop_length))
      ++oracle;
    MelSpectrogram mel = sas::waveform_to_logmel(w, c);
    CHECK(mel.frames.rows() == oracle);
    CHECK(mel.frames.rows() == static_cast<int>(len) / c.hop_length + 1);
  }
  Waveform empty;
  empty.sample_rate = 16000;
  CHECK(sas::waveform_to_logmel(empty, AudioConfig()).frames.rows() == 0);
}

TEST_CASE("frame count is monotone in waveform length") {
  AudioConfig c;
  int prev = 0;
  for (size_t len = 1; len < 3000; len += 37) {
    Waveform w;
    w.sample_rate = 16000;
    w.samples.assign(len, 0.0);
    int frames = static_cast<int>(sas::waveform_to_logmel(w, c).frames.rows());
    CHECK(frames >= prev);
    prev = frames;
  }
}

TEST_CASE("440 Hz sine peaks in the right mel channel") {
  AudioConfig c;
  Waveform w = sine(440.0, 0.5, 0.5, 16000);
  MelSpectrogram mel = sas::waveform_to_logmel(w, c);

  int want = 0;
  double best = 1e9;
  for (int m = 0; m < c.n_mels; ++m) {
    double d = std::abs(sas::mel_filter_center_hz(c, m) - 440.0);
    if (d < best) {
      best = d;
      want = m;
    }
  }
  for (int t = 2; t + 2 < mel.frames.rows(); ++t) {  // skip edge frames
    int argmax = 0;
    mel.frames.row(t).maxCoeff(&argmax);
    CHECK(argmax == want);
  }
}

TEST_CASE("one frame matches the naive DFT oracle") {
  AudioConfig c;
  Waveform w = sine(700.0, 0.2, 0.4, 16000);
  Mat fb = sas::build_mel_filterbank(c);
  MelSpectrogram mel = sas::waveform_to_logmel(w, c);
  for (int t : {0, 5, 11}) {
    Eigen::VectorXd oracle = oracle_frame_logmel(w.samples, t, c, fb);
    // compare linear energies: FFT vs naive DFT roundoff scales with the
    // total frame energy, which log-domain comparison misrepresents near
    // the floor
    double frame_scale =
        std::max(1.0, std::exp(oracle.maxCoeff()));
    for (int m = 0; m < c.n_mels; ++m) {
      double got = std::exp(mel.frames(t, m));
      double want = std::exp(oracle(m));
      CHECK(std::abs(got - want) <= 1e-10 * frame_scale);
    }
  }
}

TEST_CASE("scaling a waveform shifts log-mels by log(c)") {
  AudioConfig c;
  Waveform w = sine(440.0, 0.3, 0.2, 16000);
  Waveform w4 = w;
  for (double& s : w4.samples) s *= 4.0;
  Mat a = sas::waveform_to_logmel(w, c).frames;
  Mat b = sas::waveform_to_logmel(w4, c).frames;
  int active = 0;
  double floor = std::log(1e-5);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) <= floor + 1e-9 || b(i, j) <= floor + 1e-9) continue;
      ++active;
      CHECK(b(i, j) - a(i, j) == doctest::Approx(std::log(4.0)).epsilon(1e-9));
    }
  CHECK(active > 100);
}

TEST_CASE("sample rate mismatch is an input error") {
  AudioConfig c;
  Waveform w = sine(440.0, 0.1, 0.5, 22050);
  CHECK_THROWS_AS(sas::waveform_to_logmel(w, c), sas::InputError);
}

TEST_CASE("invalid audio config is a configuration error") {
  AudioConfig c;
  c.win_length = 2048;  // exceeds fft_size
  CHECK_THROWS_AS(sas::build_mel_filterbank(c), sas::ConfigError);
  AudioConfig c2;
  c2.fmax = 9000.0;  // above Nyquist
  CHECK_THROWS_AS(sas::build_mel_filterbank(c2), sas::ConfigError);
}

TEST_CASE("griffin-lim silence, determinism, and round trip") {
  AudioConfig c;

  MelSpectrogram floor_mel;
  floor_mel.frames = Mat::Constant(20, 80, std::log(1e-5));
  floor_mel.hop_length = c.hop_length;
  floor_mel.sample_rate = c.sample_rate;
  Waveform silent = sas::griffin_lim(floor_mel, c);
  CHECK(silent.samples.size() == 19u * 200u);
  double peak = 0.0;
  for (double s : silent.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak < 1e-2);

  Waveform again = sas::griffin_lim(floor_mel, c);
  CHECK(again.samples == silent.samples);

  MelSpectrogram empty;
  empty.frames = Mat(0, 80);
  CHECK(sas::griffin_lim(empty, c).samples.empty());

  Waveform src = sine(440.0, 0.5, 0.5, 16000);
  MelSpectrogram target = sas::waveform_to_logmel(src, c);
  Waveform rec = sas::griffin_lim(target, c);
  MelSpectrogram back = sas::waveform_to_logmel(rec, c);
  CHECK(back.frames.rows() == target.frames.rows());
  std::vector<double> per_frame;
  for (Eigen::Index t = 0; t < back.frames.rows(); ++t)
    per_frame.push_back(
        (back.frames.row(t) - target.frames.row(t)).cwiseAbs().mean());
  std::sort(per_frame.begin(), per_frame.end());
  CHECK(per_frame[per_frame.size() / 2] < 0.5);
}

TEST_CASE("mel cache round trip and validation") {
  AudioConfig c;
  MelSpectrogram mel;
  mel.frames = Mat::Random(13, 80).array() - 2.0;
  mel.hop_length = c.hop_length;
  mel.sample_rate = c.sample_rate;
  const std::string path = "test_mel_cache.sasmel";
  sas::write_mel(path, mel);
  MelSpectrogram loaded = sas::read_mel(path, c);
  CHECK(loaded.frames.rows() == 13);
  CHECK((loaded.frames - mel.frames).cwiseAbs().maxCoeff() < 1e-6);

  AudioConfig c32 = c;
  c32.n_mels = 32;
  CHECK_THROWS_AS(sas::read_mel(path, c32), sas::FormatError);
  CHECK_THROWS_AS(sas::read_mel("no_such_file.sasmel", c), sas::IoError);
  std::remove(path.c_str());
}

TEST_CASE("wav round trip") {
  Waveform w = sine(150.0, 0.05, 0.7, 16000);
  const std::string path = "test_tone.wav";
  sas::write_wav(path, w);
  Waveform r = sas::read_wav(path);
  CHECK(r.sample_rate == 16000);
  CHECK(r.samples.size() == w.samples.size());
  double worst = 0.0;
  for (size_t i = 0; i < w.samples.size(); ++i)
    worst = std::max(worst, std::abs(r.samples[i] - w.samples[i]));
  CHECK(worst <= 0.5 / 32767.0 * 1.01);
  CHECK_THROWS_AS(sas::read_wav("missing.wav"), sas::IoError);
  std::remove(path.c_str());
}
