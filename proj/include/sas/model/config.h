// include/sas/model/config.h

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

#ifndef SAS_MODEL_CONFIG_H_
#define SAS_MODEL_CONFIG_H_

#include "sas/common.h"

namespace sas {

// Every dimension is free so tests can run miniature models; defaults are the
// full desk-scale system.
struct ModelConfig {
  // Encoder.
  int n_regions = 36;
  int feature_dim = 2048;
  int n_classes = 1601;
  int fuse_units = 1024;
  int proj1_units = 1025;
  int proj2_units = 512;  // shared embedding width: memory, image, speech

  // Decoder.
  int n_mels = 80;
  int prenet_units = 256;
  int attn_dim = 128;
  int location_filters = 32;
  int location_kernel = 31;
  int rnn_units = 1024;
  int postnet_filters = 512;
  int postnet_kernel = 5;
  int postnet_layers = 5;
  double prenet_dropout = 0.5;
  double stop_threshold = 0.5;
  int max_frames = 400;

  // Speech embedder.
  int embedder_conv_filters = 512;
  int embedder_conv_kernel = 9;
  int embedder_conv_stride = 2;
  int embedder_gru_hidden = 256;  // per direction; 2x must equal proj2_units

  // Mel floor used to center decoder and embedder inputs.
  double log_floor = 1e-5;

  void validate() const;
};

}  // namespace sas

#endif  // SAS_MODEL_CONFIG_H_
