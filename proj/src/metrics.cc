// src/metrics.cc

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

#include "sas/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>
#include <utility>

namespace sas {

namespace {

void check_corpus(const TokenCorpus& candidates, const RefCorpus& references) {
  require(!candidates.empty(), "metrics: empty candidate set");
  require(candidates.size() == references.size(),
          "metrics: candidate/reference count mismatch");
  for (const auto& refs : references)
    require(!refs.empty(), "metrics: every item needs at least one reference");
}

std::string ngram_key(const Tokens& toks, std::size_t start, int n) {
  std::string key;
  for (int j = 0; j < n; ++j) {
    if (j > 0) key.push_back('\x1f');
    key += toks[start + static_cast<std::size_t>(j)];
  }
  return key;
}

std::unordered_map<std::string, int> ngram_counts(const Tokens& toks, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(toks.size()) >= n) {
    for (std::size_t s = 0; s + static_cast<std::size_t>(n) <= toks.size(); ++s)
      ++counts[ngram_key(toks, s, n)];
  }
  return counts;
}

// ---- METEOR alignment -------------------------------------------------

int count_chunks(std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  int chunks = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first + 1 ||
        pairs[i].second != pairs[i - 1].second + 1)
      ++chunks;
  }
  return chunks;
}

struct WordOcc {
  std::vector<int> c_pos, r_pos;
  int m = 0;
};

double choose(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= static_cast<double>(n - k + j) / j;
  return r;
}

double permutations(int n, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= static_cast<double>(n - j);
  return r;
}

// Exhaustive minimum-chunk search over all maximal matchings; feasible for
// caption-length inputs. Falls back to a longest-segment-first greedy
// alignment when the space is too large (repeated words in long sentences).
constexpr double kMeteorSearchCap = 2e5;

int min_chunks_exhaustive(const std::vector<WordOcc>& words) {
  std::vector<std::pair<int, int>> pairs;
  int best = 1 << 30;

  std::function<void(std::size_t)> next_word = [&](std::size_t wi) {
    if (wi == words.size()) {
      best = std::min(best, count_chunks(pairs));
      return;
    }
    const WordOcc& w = words[wi];
    std::vector<int> chosen_c;
    std::vector<bool> r_used(w.r_pos.size(), false);

    // Assigns distinct reference slots to the chosen candidate slots.
    std::function<void(std::size_t)> assign_r = [&](std::size_t ci) {
      if (ci == chosen_c.size()) {
        next_word(wi + 1);
        return;
      }
      for (std::size_t rj = 0; rj < w.r_pos.size(); ++rj) {
        if (r_used[rj]) continue;
        r_used[rj] = true;
        pairs.emplace_back(chosen_c[ci], w.r_pos[rj]);
        assign_r(ci + 1);
        pairs.pop_back();
        r_used[rj] = false;
      }
    };

    std::function<void(std::size_t)> pick_c = [&](std::size_t start) {
      if (static_cast<int>(chosen_c.size()) == w.m) {
        assign_r(0);
        return;
      }
      const std::size_t still_needed =
          static_cast<std::size_t>(w.m) - chosen_c.size();
      for (std::size_t ci = start; ci + still_needed <= w.c_pos.size(); ++ci) {
        chosen_c.push_back(w.c_pos[ci]);
        pick_c(ci + 1);
        chosen_c.pop_back();
      }
    };

    pick_c(0);
  };

  next_word(0);
  return best;
}

int min_chunks_greedy(const Tokens& cand, const Tokens& ref) {
  std::vector<bool> c_used(cand.size(), false), r_used(ref.size(), false);
  std::vector<std::pair<int, int>> pairs;
  for (;;) {
    int best_len = 0, best_i = -1, best_j = -1;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        int len = 0;
        while (i + static_cast<std::size_t>(len) < cand.size() &&
               j + static_cast<std::size_t>(len) < ref.size() &&
               !c_used[i + static_cast<std::size_t>(len)] &&
               !r_used[j + static_cast<std::size_t>(len)] &&
               cand[i + static_cast<std::size_t>(len)] ==
                   ref[j + static_cast<std::size_t>(len)])
          ++len;
        if (len > best_len) {
          best_len = len;
          best_i = static_cast<int>(i);
          best_j = static_cast<int>(j);
        }
      }
    }
    if (best_len == 0) break;
    for (int t = 0; t < best_len; ++t) {
      c_used[static_cast<std::size_t>(best_i + t)] = true;
      r_used[static_cast<std::size_t>(best_j + t)] = true;
      pairs.emplace_back(best_i + t, best_j + t);
    }
  }
  return count_chunks(std::move(pairs));
}

double meteor_item(const Tokens& cand, const Tokens& ref) {
  if (cand.empty() || ref.empty()) return 0.0;

  std::unordered_map<std::string, WordOcc> by_word;
  for (std::size_t i = 0; i < cand.size(); ++i)
    by_word[cand[i]].c_pos.push_back(static_cast<int>(i));
  for (std::size_t j = 0; j < ref.size(); ++j)
    by_word[ref[j]].r_pos.push_back(static_cast<int>(j));

  std::vector<WordOcc> words;
  int matches = 0;
  double space = 1.0;
  for (auto& [word, occ] : by_word) {
    occ.m = static_cast<int>(std::min(occ.c_pos.size(), occ.r_pos.size()));
    if (occ.m == 0) continue;
    matches += occ.m;
    space *= choose(static_cast<int>(occ.c_pos.size()), occ.m) *
             permutations(static_cast<int>(occ.r_pos.size()), occ.m);
    words.push_back(occ);
  }
  if (matches == 0) return 0.0;

  const int chunks = space <= kMeteorSearchCap ? min_chunks_exhaustive(words)
                                               : min_chunks_greedy(cand, ref);

  const double p = static_cast<double>(matches) / cand.size();
  const double r = static_cast<double>(matches) / ref.size();
  const double f = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / matches;
  return f * (1.0 - 0.5 * frag * frag * frag);
}

// ---- ROUGE-L ----------------------------------------------------------

int lcs_length(const Tokens& a, const Tokens& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

Tokens tokenize_caption(const std::string& text) {
  Tokens out;
  std::string cur;
  for (char ch : text) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

BleuScores bleu(const TokenCorpus& candidates, const RefCorpus& references) {
  check_corpus(candidates, references);
  double num[5] = {0, 0, 0, 0, 0}, den[5] = {0, 0, 0, 0, 0};
  double c_total = 0.0, r_total = 0.0;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens& cand = candidates[i];
    const int c_len = static_cast<int>(cand.size());
    c_total += c_len;

    int best_len = static_cast<int>(references[i][0].size());
    for (const Tokens& ref : references[i]) {
      const int len = static_cast<int>(ref.size());
      const int d_new = std::abs(len - c_len), d_old = std::abs(best_len - c_len);
      if (d_new < d_old || (d_new == d_old && len < best_len)) best_len = len;
    }
    r_total += best_len;

    for (int n = 1; n <= 4; ++n) {
      const auto cc = ngram_counts(cand, n);
      std::unordered_map<std::string, int> rmax;
      for (const Tokens& ref : references[i]) {
        for (const auto& [g, c] : ngram_counts(ref, n)) {
          auto [it, inserted] = rmax.emplace(g, c);
          if (!inserted) it->second = std::max(it->second, c);
        }
      }
      for (const auto& [g, c] : cc) {
        const auto it = rmax.find(g);
        num[n] += std::min(c, it == rmax.end() ? 0 : it->second);
      }
      den[n] += std::max(0, c_len - n + 1);
    }
  }

  BleuScores out;
  if (c_total == 0.0) return out;
  const double bp =
      c_total >= r_total ? 1.0 : std::exp(1.0 - r_total / c_total);
  double* scores[4] = {&out.b1, &out.b2, &out.b3, &out.b4};
  for (int k = 1; k <= 4; ++k) {
    double log_sum = 0.0;
    bool zero = false;
    for (int n = 1; n <= k; ++n) {
      if (num[n] <= 0.0 || den[n] <= 0.0) {
        zero = true;
        break;
      }
      log_sum += std::log(num[n] / den[n]);
    }
    *scores[k - 1] = zero ? 0.0 : 100.0 * bp * std::exp(log_sum / k);
  }
  return out;
}

double meteor_exact(const TokenCorpus& candidates,
                    const RefCorpus& references) {
  check_corpus(candidates, references);
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double best = 0.0;
    for (const Tokens& ref : references[i])
      best = std::max(best, meteor_item(candidates[i], ref));
    total += best;
  }
  return 100.0 * total / static_cast<double>(candidates.size());
}

double rouge_l(const TokenCorpus& candidates, const RefCorpus& references,
               double beta) {
  check_corpus(candidates, references);
  require(beta > 0.0, "rouge_l: beta must be positive");
  const double b2 = beta * beta;
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens& cand = candidates[i];
    double best = 0.0;
    for (const Tokens& ref : references[i]) {
      if (cand.empty() || ref.empty()) continue;
      const int lcs = lcs_length(cand, ref);
      if (lcs == 0) continue;
      const double p = static_cast<double>(lcs) / cand.size();
      const double r = static_cast<double>(lcs) / ref.size();
      best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
    }
    total += best;
  }
  return 100.0 * total / static_cast<double>(candidates.size());
}

double cider_d(const TokenCorpus& candidates, const RefCorpus& references) {
  check_corpus(candidates, references);
  const std::size_t n_items = candidates.size();
  const double log_n = std::log(static_cast<double>(n_items));

  // Document frequencies over each image's reference set, per order.
  std::vector<std::unordered_map<std::string, int>> df(5);
  for (const auto& refs : references) {
    for (int n = 1; n <= 4; ++n) {
      std::set<std::string> seen;
      for (const Tokens& ref : refs)
        for (const auto& [g, c] : ngram_counts(ref, n)) seen.insert(g);
      for (const auto& g : seen) ++df[static_cast<std::size_t>(n)][g];
    }
  }
  const auto idf = [&](int n, const std::string& g) {
    const auto it = df[static_cast<std::size_t>(n)].find(g);
    const double d = it == df[static_cast<std::size_t>(n)].end()
                         ? 0.0
                         : static_cast<double>(it->second);
    return log_n - std::log(std::max(1.0, d));
  };

  double total = 0.0;
  for (std::size_t i = 0; i < n_items; ++i) {
    const Tokens& cand = candidates[i];
    double order_sum = 0.0;
    for (int n = 1; n <= 4; ++n) {
      const auto cc = ngram_counts(cand, n);
      double ref_sum = 0.0;
      for (const Tokens& ref : references[i]) {
        const auto rc = ngram_counts(ref, n);
        if (cc.empty() || rc.empty()) continue;

        double norm_c = 0.0, norm_r = 0.0, val = 0.0;
        for (const auto& [g, c] : cc) {
          const double w = c * idf(n, g);
          norm_c += w * w;
        }
        for (const auto& [g, c] : rc) {
          const double wr = c * idf(n, g);
          norm_r += wr * wr;
          const auto it = cc.find(g);
          if (it != cc.end())
            val += std::min(it->second * idf(n, g), wr) * wr;
        }

        double sim;
        if (norm_c > 0.0 && norm_r > 0.0) {
          sim = val / (std::sqrt(norm_c) * std::sqrt(norm_r));
        } else if (norm_c == 0.0 && norm_r == 0.0) {
          // Degenerate corpus where every n-gram saturates the idf: fall
          // back to the clipped cosine of raw counts.
          double nc = 0.0, nr = 0.0, v = 0.0;
          for (const auto& [g, c] : cc) nc += static_cast<double>(c) * c;
          for (const auto& [g, c] : rc) {
            nr += static_cast<double>(c) * c;
            const auto it = cc.find(g);
            if (it != cc.end())
              v += static_cast<double>(std::min(it->second, c)) * c;
          }
          sim = v / (std::sqrt(nc) * std::sqrt(nr));
        } else {
          sim = 0.0;
        }

        const double gap =
            static_cast<double>(cand.size()) - static_cast<double>(ref.size());
        ref_sum += sim * std::exp(-gap * gap / 72.0);
      }
      order_sum += ref_sum / static_cast<double>(references[i].size());
    }
    total += 10.0 * order_sum / 4.0;
  }
  return total / static_cast<double>(n_items);
}

MetricReport score_all(const TokenCorpus& candidates,
                       const RefCorpus& references) {
  const BleuScores b = bleu(candidates, references);
  MetricReport report;
  report.b1 = b.b1;
  report.b2 = b.b2;
  report.b3 = b.b3;
  report.b4 = b.b4;
  report.meteor = meteor_exact(candidates, references);
  report.rouge = rouge_l(candidates, references);
  report.cider = cider_d(candidates, references);
  return report;
}

}  // namespace sas
