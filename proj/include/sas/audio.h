// include/sas/audio.h

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

#ifndef SAS_AUDIO_H_
#define SAS_AUDIO_H_

#include <cstdint>
#include <vector>

#include "sas/common.h"

namespace sas {

// Framing follows 50 ms windows with a 12.5 ms hop at 16 kHz, so window and
// hop are integer sample counts.
struct AudioConfig {
  int sample_rate = 16000;
  int win_length = 800;
  int hop_length = 200;
  int fft_size = 1024;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;
  int griffin_lim_iters = 60;

  void validate() const;
  int n_bins() const { return fft_size / 2 + 1; }
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;
};

struct MelSpectrogram {
  Mat frames;  // T x n_mels, natural-log mel energies
  int hop_length = 200;
  int sample_rate = 16000;
};

// Triangular mel filters on the HTK scale 2595*log10(1 + f/700), built in
// the Hz domain with unit peaks.  Shape n_mels x (fft_size/2 + 1).
Mat build_mel_filterbank(const AudioConfig& config);

// Center frequency (Hz) of filter k, exposed for spectral sanity checks.
double mel_filter_center_hz(const AudioConfig& config, int k);

// Short-time analysis: reflect-pad by fft_size/2, periodic Hann window of
// win_length centered in each fft_size frame, frame count floor(len/hop)+1.
MelSpectrogram waveform_to_logmel(const Waveform& wave,
                                  const AudioConfig& config);

// Iterative phase reconstruction from a log-mel spectrogram.  The mel
// inversion uses the filterbank pseudo-inverse with negative leakage
// clipped to zero.  Starts from zero phase, so the output is a pure
// function of the spectrogram and config.
Waveform griffin_lim(const MelSpectrogram& mel, const AudioConfig& config);

}  // namespace sas

#endif  // SAS_AUDIO_H_
