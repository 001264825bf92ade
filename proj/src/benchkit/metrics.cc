#include "persuasion/benchkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "persuasion/common/errors.h"
#include "persuasion/common/stats.h"
#include "persuasion/corpus/text.h"

namespace persuasion::benchkit {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, int> CountNgrams(const std::vector<std::string>& tokens, std::size_t n) {
  std::map<Ngram, int> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t TokenLcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

double F1(double overlap, std::size_t cand_len, std::size_t ref_len) {
  if (overlap <= 0.0 || cand_len == 0 || ref_len == 0) return 0.0;
  double p = overlap / static_cast<double>(cand_len);
  double r = overlap / static_cast<double>(ref_len);
  return 2.0 * p * r / (p + r);
}

double ClampedCosine(const providers::EmbeddingVector& a,
                     const providers::EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ContractError("token embedding dimensions differ");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double GreedyMean(const std::vector<providers::EmbeddingVector>& from,
                  const std::vector<providers::EmbeddingVector>& to) {
  std::vector<double> best;
  best.reserve(from.size());
  for (const auto& f : from) {
    double m = 0.0;
    for (const auto& t : to) m = std::max(m, ClampedCosine(f, t));
    best.push_back(m);
  }
  return StableMean(best);
}

}  // namespace

std::vector<std::string> MetricTokens(const std::string& text) {
  return corpus::SplitWhitespace(corpus::ToLowerAscii(corpus::NormalizeText(text)));
}

double Bleu(const std::string& candidate, const std::vector<std::string>& references,
            int max_n) {
  if (max_n < 1 || max_n > 2) throw PreconditionError("BLEU order must be 1 or 2");
  if (references.empty()) throw PreconditionError("BLEU needs at least one reference");
  auto cand = MetricTokens(candidate);
  if (cand.empty()) return 0.0;
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(MetricTokens(r));

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    auto cand_counts = CountNgrams(cand, static_cast<std::size_t>(n));
    std::map<Ngram, int> max_ref;
    for (const auto& r : refs) {
      for (const auto& [g, c] : CountNgrams(r, static_cast<std::size_t>(n))) {
        max_ref[g] = std::max(max_ref[g], c);
      }
    }
    double matched = 0.0, total = 0.0;
    for (const auto& [g, c] : cand_counts) {
      total += c;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) matched += std::min(c, it->second);
    }
    double p;
    if (matched > 0.0) {
      p = matched / total;
    } else if (n >= 2) {
      p = 1.0 / (total + 1.0);
    } else {
      return 0.0;
    }
    log_sum += std::log(p);
  }
  double c = static_cast<double>(cand.size());
  double r = static_cast<double>(refs.front().size());
  for (const auto& ref : refs) {
    double len = static_cast<double>(ref.size());
    double d = std::fabs(len - c), best = std::fabs(r - c);
    if (d < best || (d == best && len < r)) r = len;
  }
  double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / max_n);
}

double Rouge(const std::string& candidate, const std::vector<std::string>& references,
             RougeVariant variant) {
  auto cand = MetricTokens(candidate);
  double best = 0.0;
  for (const auto& ref_text : references) {
    auto ref = MetricTokens(ref_text);
    double overlap = 0.0;
    if (variant == RougeVariant::kLcs) {
      overlap = static_cast<double>(TokenLcs(cand, ref));
    } else {
      auto cc = CountNgrams(cand, 1);
      auto rc = CountNgrams(ref, 1);
      for (const auto& [g, c] : cc) {
        auto it = rc.find(g);
        if (it != rc.end()) overlap += std::min(c, it->second);
      }
    }
    best = std::max(best, F1(overlap, cand.size(), ref.size()));
  }
  return best;
}

double EmbedFScore(const std::vector<providers::EmbeddingVector>& candidate,
                   const std::vector<providers::EmbeddingVector>& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  double p = GreedyMean(candidate, reference);
  double r = GreedyMean(reference, candidate);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

double EmbedFScore(const std::string& candidate, const std::string& reference,
                   providers::ProviderClient& embedder) {
  auto c = providers::EmbedTokens(candidate, embedder);
  auto r = providers::EmbedTokens(reference, embedder);
  return EmbedFScore(c.vectors, r.vectors);
}

double Accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels) {
  if (predictions.size() != labels.size()) {
    throw PreconditionError("accuracy inputs differ in length");
  }
  if (labels.empty()) throw PreconditionError("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("correlation inputs differ in length");
  if (xs.size() < 2) throw PreconditionError("correlation needs at least two points");
  double mx = StableMean(xs), my = StableMean(ys);
  StableSum sxy, sxx, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy.Add(dx * dy);
    sxx.Add(dx * dx);
    syy.Add(dy * dy);
  }
  if (sxx.Value() == 0.0 || syy.Value() == 0.0) {
    throw UndefinedError("correlation undefined for zero variance");
  }
  double r = sxy.Value() / std::sqrt(sxx.Value() * syy.Value());
  return std::clamp(r, -1.0, 1.0);
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("correlation inputs differ in length");
  auto rx = MidRanks(xs);
  auto ry = MidRanks(ys);
  return Pearson(rx, ry);
}

}  // namespace persuasion::benchkit
