#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radeval::nlg {

using Tokens = std::vector<std::string>;

/// The project tokenizer, frozen: ASCII lowercase, punctuation characters
/// split into their own single-char tokens, whitespace separates. All metric
/// examples and fixtures use it.
Tokens tokenize(std::string_view text);

/// Tokenize a whole corpus, one report per line (aligned by line number).
std::vector<Tokens> tokenize_lines(std::span<const std::string> lines);

/// Corpus-level BLEU with uniform weights over n = 1..4, brevity penalty,
/// single reference, no smoothing. A zero n-gram precision zeroes the whole
/// score (sharp edge, by construction of unsmoothed BLEU).
/// Throws AlignmentError on length mismatch or empty corpus.
double bleu4(std::span<const Tokens> hyps, std::span<const Tokens> refs);

/// Per-example LCS F-measure, beta = 1.2 by default:
///   P = LCS/|hyp|, R = LCS/|ref|, F = (1+b^2) P R / (R + b^2 P)
/// A pair with an empty side scores 0.
double rouge_l_pair(const Tokens& hyp, const Tokens& ref, double beta = 1.2);

/// Macro average of rouge_l_pair over the corpus.
double rouge_l(std::span<const Tokens> hyps, std::span<const Tokens> refs,
               double beta = 1.2);
std::vector<double> rouge_l_per_example(std::span<const Tokens> hyps,
                                        std::span<const Tokens> refs,
                                        double beta = 1.2, unsigned jobs = 1);

/// CIDEr-D: tf-idf n-gram (n = 1..4) cosine similarity with a gaussian
/// length-difference penalty (sigma = 6), averaged over n, scaled by 10,
/// macro-averaged over the corpus. idf comes from the reference corpus
/// (idf = log N - log max(1, df)), so a 1-example corpus degenerates to 0
/// and >= 2 examples are needed for a meaningful score.
double cider_d(std::span<const Tokens> hyps, std::span<const Tokens> refs,
               double sigma = 6.0);
std::vector<double> cider_d_per_example(std::span<const Tokens> hyps,
                                        std::span<const Tokens> refs,
                                        double sigma = 6.0, unsigned jobs = 1);

}  // namespace radeval::nlg
