#include "radeval/nlg_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <thread>

#include "radeval/error.hpp"

namespace radeval::nlg {

namespace {

constexpr int kMaxOrder = 4;

void check_aligned(std::span<const Tokens> hyps, std::span<const Tokens> refs) {
  if (hyps.size() != refs.size()) {
    throw AlignmentError("corpus length mismatch: " +
                         std::to_string(hyps.size()) + " hypotheses vs " +
                         std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) {
    throw AlignmentError("empty corpus");
  }
}

// n-grams joined with '\x1f' so multi-token grams cannot collide.
using NgramCounts = std::map<std::string, std::int64_t>;

NgramCounts count_ngrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (int k = 1; k < n; ++k) {
      gram.push_back('\x1f');
      gram += tokens[i + k];
    }
    ++counts[gram];
  }
  return counts;
}

void run_indexed(std::size_t n, unsigned jobs,
                 const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (std::ispunct(u)) {
      flush();
      tokens.push_back(std::string(1, c));
    } else {
      current.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  flush();
  return tokens;
}

std::vector<Tokens> tokenize_lines(std::span<const std::string> lines) {
  std::vector<Tokens> out;
  out.reserve(lines.size());
  for (const std::string& line : lines) out.push_back(tokenize(line));
  return out;
}

double bleu4(std::span<const Tokens> hyps, std::span<const Tokens> refs) {
  check_aligned(hyps, refs);
  std::array<std::int64_t, kMaxOrder> matches{};
  std::array<std::int64_t, kMaxOrder> totals{};
  std::int64_t hyp_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    hyp_len += static_cast<std::int64_t>(hyps[i].size());
    ref_len += static_cast<std::int64_t>(refs[i].size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      NgramCounts hyp_counts = count_ngrams(hyps[i], n);
      NgramCounts ref_counts = count_ngrams(refs[i], n);
      for (const auto& [gram, count] : hyp_counts) {
        totals[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          matches[n - 1] += std::min(count, it->second);
        }
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (totals[n] == 0 || matches[n] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matches[n]) /
                              static_cast<double>(totals[n]));
  }
  log_precision /= kMaxOrder;
  const double brevity =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(hyp_len));
  return brevity * std::exp(log_precision);
}

namespace {

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double rouge_l_pair(const Tokens& hyp, const Tokens& ref, double beta) {
  if (hyp.empty() || ref.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(hyp, ref));
  const double precision = lcs / static_cast<double>(hyp.size());
  const double recall = lcs / static_cast<double>(ref.size());
  if (precision <= 0.0 || recall <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (recall + b2 * precision);
}

std::vector<double> rouge_l_per_example(std::span<const Tokens> hyps,
                                        std::span<const Tokens> refs,
                                        double beta, unsigned jobs) {
  check_aligned(hyps, refs);
  std::vector<double> scores(hyps.size());
  run_indexed(hyps.size(), jobs, [&](std::size_t i) {
    scores[i] = rouge_l_pair(hyps[i], refs[i], beta);
  });
  return scores;
}

double rouge_l(std::span<const Tokens> hyps, std::span<const Tokens> refs,
               double beta) {
  std::vector<double> scores = rouge_l_per_example(hyps, refs, beta);
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

namespace {

struct TfIdfVector {
  std::array<std::map<std::string, double>, kMaxOrder> weights;
  std::array<double, kMaxOrder> norm{};
  std::int64_t length = 0;  // unigram token count
};

TfIdfVector to_tfidf(const Tokens& tokens, const NgramCounts& doc_freq,
                     double log_corpus_size) {
  TfIdfVector vec;
  vec.length = static_cast<std::int64_t>(tokens.size());
  for (int n = 1; n <= kMaxOrder; ++n) {
    for (const auto& [gram, count] : count_ngrams(tokens, n)) {
      auto df_it = doc_freq.find(gram);
      const double df =
          df_it == doc_freq.end() ? 0.0 : static_cast<double>(df_it->second);
      const double idf = log_corpus_size - std::log(std::max(1.0, df));
      const double w = static_cast<double>(count) * idf;
      vec.weights[n - 1][gram] = w;
      vec.norm[n - 1] += w * w;
    }
  }
  for (double& x : vec.norm) x = std::sqrt(x);
  return vec;
}

double cider_pair(const TfIdfVector& hyp, const TfIdfVector& ref,
                  double sigma) {
  const double delta = static_cast<double>(hyp.length - ref.length);
  const double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
  double total = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    double dot = 0.0;
    for (const auto& [gram, w_hyp] : hyp.weights[n]) {
      auto it = ref.weights[n].find(gram);
      if (it != ref.weights[n].end()) {
        // clipped: gaming long repeated hypotheses earns no extra credit
        dot += std::min(w_hyp, it->second) * it->second;
      }
    }
    if (hyp.norm[n] > 0.0 && ref.norm[n] > 0.0) {
      total += penalty * dot / (hyp.norm[n] * ref.norm[n]);
    }
  }
  return 10.0 * total / kMaxOrder;
}

}  // namespace

std::vector<double> cider_d_per_example(std::span<const Tokens> hyps,
                                        std::span<const Tokens> refs,
                                        double sigma, unsigned jobs) {
  check_aligned(hyps, refs);
  // Document frequency over the reference corpus: one count per reference
  // sentence containing the n-gram, single sequential pass.
  NgramCounts doc_freq;
  for (const Tokens& ref : refs) {
    std::map<std::string, bool> seen;
    for (int n = 1; n <= kMaxOrder; ++n) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) {
        seen.emplace(gram, true);
      }
    }
    for (const auto& [gram, unused] : seen) ++doc_freq[gram];
  }
  const double log_corpus_size = std::log(static_cast<double>(refs.size()));
  std::vector<double> scores(hyps.size());
  run_indexed(hyps.size(), jobs, [&](std::size_t i) {
    scores[i] = cider_pair(to_tfidf(hyps[i], doc_freq, log_corpus_size),
                           to_tfidf(refs[i], doc_freq, log_corpus_size), sigma);
  });
  return scores;
}

double cider_d(std::span<const Tokens> hyps, std::span<const Tokens> refs,
               double sigma) {
  std::vector<double> scores = cider_d_per_example(hyps, refs, sigma);
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace radeval::nlg
