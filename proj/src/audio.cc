// src/audio.cc

// Copyright 2026  SAS toolkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sas/audio.h"

#include <fftw3.h>

#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <mutex>

namespace sas {

namespace {

constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) {
  return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
}

// FFTW plan creation mutates global planner state; execution does not.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlans {
  int n;
  double* real;
  fftw_complex* cplx;
  fftw_plan fwd;
  fftw_plan inv;

  explicit FftwPlans(int fft_size) : n(fft_size) {
    real = fftw_alloc_real(static_cast<size_t>(n));
    cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
  }
  ~FftwPlans() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(cplx);
  }
  FftwPlans(const FftwPlans&) = delete;
  FftwPlans& operator=(const FftwPlans&) = delete;
};

// Hann window of win samples placed in the middle of the fft frame.
std::vector<double> framed_window(const AudioConfig& c) {
  std::vector<double> w(static_cast<size_t>(c.fft_size), 0.0);
  int offset = (c.fft_size - c.win_length) / 2;
  for (int i = 0; i < c.win_length; ++i)
    w[static_cast<size_t>(offset + i)] =
        0.5 - 0.5 * std::cos(2.0 * kPi * i / c.win_length);
  return w;
}

// Mirror an out-of-range index back into [0, n) without repeating the edge
// sample, matching reflect padding.
Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  Eigen::Index period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  return i < n ? i : period - i;
}

std::vector<double> reflect_pad(const std::vector<double>& x, int pad) {
  std::vector<double> y;
  auto n = static_cast<Eigen::Index>(x.size());
  y.reserve(x.size() + static_cast<size_t>(2 * pad));
  for (Eigen::Index i = -pad; i < n + pad; ++i)
    y.push_back(x[static_cast<size_t>(reflect_index(i, n))]);
  return y;
}

int frame_count(size_t len, const AudioConfig& c) {
  return static_cast<int>(len / static_cast<size_t>(c.hop_length)) + 1;
}

using Cplx = std::complex<double>;
using CplxMat =
    Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;  // T x n_bins

CplxMat stft(const std::vector<double>& samples, const AudioConfig& c,
             FftwPlans& plans) {
  const int pad = c.fft_size / 2;
  std::vector<double> padded = reflect_pad(samples, pad);
  const int frames = frame_count(samples.size(), c);
  std::vector<double> window = framed_window(c);
  CplxMat out(frames, c.n_bins());
  for (int t = 0; t < frames; ++t) {
    const size_t start = static_cast<size_t>(t) * c.hop_length;
    for (int i = 0; i < c.fft_size; ++i)
      plans.real[i] = padded[start + static_cast<size_t>(i)] *
                      window[static_cast<size_t>(i)];
    fftw_execute(plans.fwd);
    for (int k = 0; k < c.n_bins(); ++k)
      out(t, k) = Cplx(plans.cplx[k][0], plans.cplx[k][1]);
  }
  return out;
}

// Overlap-add resynthesis with squared-window normalization; undoes the
// analysis padding and returns len = (frames - 1) * hop samples.
std::vector<double> istft(const CplxMat& spec, const AudioConfig& c,
                          FftwPlans& plans) {
  const int frames = static_cast<int>(spec.rows());
  const int pad = c.fft_size / 2;
  const size_t padded_len =
      static_cast<size_t>(frames - 1) * c.hop_length + c.fft_size;
  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> norm(padded_len, 0.0);
  std::vector<double> window = framed_window(c);
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < c.n_bins(); ++k) {
      plans.cplx[k][0] = spec(t, k).real();
      plans.cplx[k][1] = spec(t, k).imag();
    }
    fftw_execute(plans.inv);
    const size_t start = static_cast<size_t>(t) * c.hop_length;
    for (int i = 0; i < c.fft_size; ++i) {
      double w = window[static_cast<size_t>(i)];
      acc[start + static_cast<size_t>(i)] += w * plans.real[i] / c.fft_size;
      norm[start + static_cast<size_t>(i)] += w * w;
    }
  }
  for (size_t i = 0; i < padded_len; ++i)
    if (norm[i] > 1e-10) acc[i] /= norm[i];
  const size_t out_len = padded_len - 2 * static_cast<size_t>(pad);
  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = acc[i + static_cast<size_t>(pad)];
  return out;
}

}  // namespace

void AudioConfig::validate() const {
  require_config(sample_rate > 0, "audio: sample_rate must be positive");
  require_config(win_length > 0 && hop_length > 0,
                 "audio: window and hop must be positive");
  require_config(win_length <= fft_size, "audio: win_length exceeds fft_size");
  require_config(hop_length <= win_length, "audio: hop exceeds win_length");
  require_config(n_mels >= 1, "audio: n_mels must be at least 1");
  require_config(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0,
                 "audio: need 0 <= fmin < fmax <= sample_rate/2");
  require_config(log_floor > 0.0, "audio: log_floor must be positive");
  require_config(griffin_lim_iters >= 1, "audio: griffin_lim_iters < 1");
}

static std::vector<double> mel_band_edges_hz(const AudioConfig& c) {
  double lo = hz_to_mel(c.fmin), hi = hz_to_mel(c.fmax);
  std::vector<double> hz(static_cast<size_t>(c.n_mels) + 2);
  for (int m = 0; m < c.n_mels + 2; ++m)
    hz[static_cast<size_t>(m)] =
        mel_to_hz(lo + (hi - lo) * m / (c.n_mels + 1));
  return hz;
}

Mat build_mel_filterbank(const AudioConfig& c) {
  c.validate();
  std::vector<double> hz = mel_band_edges_hz(c);
  Mat fb = Mat::Zero(c.n_mels, c.n_bins());
  for (int m = 0; m < c.n_mels; ++m) {
    double left = hz[static_cast<size_t>(m)];
    double center = hz[static_cast<size_t>(m) + 1];
    double right = hz[static_cast<size_t>(m) + 2];
    for (int k = 0; k < c.n_bins(); ++k) {
      double f = static_cast<double>(k) * c.sample_rate / c.fft_size;
      double up = (f - left) / (center - left);
      double down = (right - f) / (right - center);
      fb(m, k) = std::max(0.0, std::min(up, down));
    }
    require(fb.row(m).sum() > 0.0,
            "mel filterbank: empty filter, fft_size too small for n_mels");
  }
  return fb;
}

double mel_filter_center_hz(const AudioConfig& c, int k) {
  require(k >= 0 && k < c.n_mels, "mel_filter_center_hz: bad filter index");
  return mel_band_edges_hz(c)[static_cast<size_t>(k) + 1];
}

MelSpectrogram waveform_to_logmel(const Waveform& wave,
                                  const AudioConfig& c) {
  c.validate();
  if (wave.sample_rate != c.sample_rate)
    throw InputError("waveform_to_logmel: sample rate " +
                     std::to_string(wave.sample_rate) +
                     " does not match config " +
                     std::to_string(c.sample_rate));
  MelSpectrogram mel;
  mel.hop_length = c.hop_length;
  mel.sample_rate = c.sample_rate;
  if (wave.samples.empty()) {
    mel.frames = Mat(0, c.n_mels);
    return mel;
  }
  for (double s : wave.samples)
    if (!std::isfinite(s))
      throw InputError("waveform_to_logmel: non-finite sample");

  Mat fb = build_mel_filterbank(c);
  FftwPlans plans(c.fft_size);
  CplxMat spec = stft(wave.samples, c, plans);
  Mat mags = spec.cwiseAbs();
  Mat energies = mags * fb.transpose();  // T x n_mels
  mel.frames = energies.cwiseMax(c.log_floor).array().log();
  return mel;
}

Waveform griffin_lim(const MelSpectrogram& mel, const AudioConfig& c) {
  c.validate();
  Waveform out;
  out.sample_rate = c.sample_rate;
  const int frames = static_cast<int>(mel.frames.rows());
  if (frames == 0) return out;
  require(mel.frames.cols() == c.n_mels,
          "griffin_lim: mel channel count does not match config");

  Mat fb = build_mel_filterbank(c);
  Mat pinv = Eigen::CompleteOrthogonalDecomposition<Mat>(fb).pseudoInverse();
  Mat target = (mel.frames.array().exp().matrix() * pinv.transpose())
                   .cwiseMax(0.0);  // T x n_bins linear magnitudes

  // Zero initial phase: coherent starts converge far better in the mel
  // domain than seeded random phases, and keep the op a pure function.
  CplxMat spec(frames, c.n_bins());
  for (int t = 0; t < frames; ++t)
    for (int k = 0; k < c.n_bins(); ++k)
      spec(t, k) = Cplx(target(t, k), 0.0);

  FftwPlans plans(c.fft_size);
  std::vector<double> x;
  for (int it = 0; it < c.griffin_lim_iters; ++it) {
    x = istft(spec, c, plans);
    CplxMat est = stft(x, c, plans);
    require(est.rows() == frames, "griffin_lim: frame count drift");
    for (int t = 0; t < frames; ++t)
      for (int k = 0; k < c.n_bins(); ++k) {
        double mag = std::abs(est(t, k));
        Cplx phase = mag > 1e-12 ? est(t, k) / mag : Cplx(1.0, 0.0);
        spec(t, k) = target(t, k) * phase;
      }
  }
  x = istft(spec, c, plans);
  for (double& s : x) s = std::clamp(s, -1.0, 1.0);
  out.samples = std::move(x);
  return out;
}

}  // namespace sas
