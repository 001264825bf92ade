#include "persuasion/transcreate/transcreate.h"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "persuasion/benchkit/templates.h"
#include "persuasion/common/errors.h"
#include "persuasion/common/parallel.h"
#include "persuasion/corpus/stopwords.h"
#include "persuasion/corpus/text.h"
#include "persuasion/simtext/similarity.h"

namespace persuasion::transcreate {
namespace {

using corpus::PostRecord;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

double Percentile(const PostRecord& p) {
  if (!p.like_percentile) {
    throw PreconditionError("post '" + p.post_id + "' has no like_percentile");
  }
  return *p.like_percentile;
}

std::string DraftMapping(const std::vector<CompanyGroup>& groups) {
  std::string out;
  for (const auto& g : groups) {
    if (g.accounts.size() < 2) continue;
    if (!out.empty()) out += "; ";
    out += g.group_id + ": ";
    for (std::size_t i = 0; i < g.accounts.size(); ++i) {
      if (i > 0) out += ", ";
      out += g.accounts[i];
    }
  }
  return out;
}

}  // namespace

std::vector<AccountSignature> BuildSignatures(
    const std::vector<PostRecord>& posts,
    const std::vector<corpus::AccountRecord>& accounts, std::size_t workers) {
  std::map<std::string, std::vector<const PostRecord*>> by_account;
  for (const auto& a : accounts) by_account[a.account_id];
  for (const auto& p : posts) by_account[p.account_id].push_back(&p);

  std::vector<AccountSignature> out;
  out.reserve(by_account.size());
  for (const auto& [id, _] : by_account) out.push_back({id, {}});
  std::vector<const std::vector<const PostRecord*>*> slots;
  for (const auto& [id, list] : by_account) slots.push_back(&list);

  ParallelFor(out.size(), workers, [&](std::size_t i) {
    auto& bag = out[i].bag;
    std::map<std::string, int> freq;
    for (const PostRecord* p : *slots[i]) {
      for (const auto& h : p->hashtags) bag.insert("#" + corpus::ToLowerAscii(h));
      for (const auto& m : p->mentions) bag.insert("@" + corpus::ToLowerAscii(m));
      for (const auto& d : p->link_domains) {
        bag.insert(corpus::RegistrableDomain(corpus::ToLowerAscii(d)));
      }
      for (auto& w : corpus::ContentWords(p->text)) ++freq[w];
    }
    for (const auto& [w, n] : freq) {
      if (n >= kKeywordMinFrequency) bag.insert(w);
    }
  });
  return out;
}

GroupingResult GroupAccounts(const std::vector<AccountSignature>& signatures,
                             double jaccard_min,
                             providers::ProviderClient* assistant,
                             const std::vector<corpus::AccountRecord>& accounts) {
  std::vector<const AccountSignature*> sigs;
  for (const auto& s : signatures) sigs.push_back(&s);
  std::sort(sigs.begin(), sigs.end(), [](auto* a, auto* b) {
    return a->account_id < b->account_id;
  });
  UnionFind uf(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    for (std::size_t j = i + 1; j < sigs.size(); ++j) {
      if (simtext::JaccardSimilarity(sigs[i]->bag, sigs[j]->bag).value >= jaccard_min) {
        uf.Union(i, j);
      }
    }
  }
  auto collect = [&] {
    std::map<std::size_t, std::vector<std::string>> members;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      members[uf.Find(i)].push_back(sigs[i]->account_id);
    }
    std::vector<CompanyGroup> groups;
    for (auto& [root, ids] : members) {
      std::sort(ids.begin(), ids.end());
      groups.push_back({"g:" + ids.front(), ids});
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.group_id < b.group_id; });
    return groups;
  };

  GroupingResult result;
  result.groups = collect();
  if (!assistant) return result;

  std::map<std::string, const corpus::AccountRecord*> info;
  for (const auto& a : accounts) info[a.account_id] = &a;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < sigs.size(); ++i) index[sigs[i]->account_id] = i;

  // The offer list is fixed before any attachment so the outcome does not
  // depend on the order singletons are visited.
  const auto base = result.groups;
  std::vector<std::string> labels;
  for (const auto& g : base) {
    if (g.accounts.size() >= 2) labels.push_back(g.group_id);
  }
  if (labels.empty()) return result;
  labels.push_back("none");
  const std::string mapping = DraftMapping(base);
  const auto& tmpl = benchkit::TemplateRegistry::Default().Get("username_mapping");

  for (const auto& g : base) {
    if (g.accounts.size() != 1) continue;
    const std::string& id = g.accounts.front();
    auto it = info.find(id);
    const corpus::AccountRecord* rec = it == info.end() ? nullptr : it->second;
    std::string prompt = tmpl.Render({
        {"DRAFT_MAPPING", mapping},
        {"username", id},
        {"name", rec ? rec->display_name : id},
        {"description", rec ? rec->bio : ""},
        {"location", "unknown"},
        {"verified_type", "not"},
        {"created_at", "unknown"},
    });
    try {
      std::string label = providers::Classify(prompt, labels, *assistant);
      if (label == "none") continue;
      auto target = std::find_if(base.begin(), base.end(), [&](const auto& b) {
        return b.group_id == label && b.accounts.size() >= 2;
      });
      if (target == base.end()) {
        result.errors[id] = "assistant named unknown group '" + label + "'";
        continue;
      }
      uf.Union(index.at(id), index.at(target->accounts.front()));
      result.assisted[id] = label;
    } catch (const ContractError&) {
      throw;
    } catch (const Error& e) {
      result.errors[id] = e.what();
    }
  }
  result.groups = collect();
  // Report the group each assisted account finally landed in.
  for (auto& [id, gid] : result.assisted) {
    for (const auto& g : result.groups) {
      if (std::binary_search(g.accounts.begin(), g.accounts.end(), id)) gid = g.group_id;
    }
  }
  return result;
}

Json ToJson(const std::vector<CompanyGroup>& groups) {
  Json j = Json::object();
  for (const auto& g : groups) j[g.group_id] = g.accounts;
  return j;
}

std::vector<CompanyGroup> GroupsFromJson(const Json& j) {
  std::vector<CompanyGroup> out;
  for (const auto& [id, members] : j.items()) {
    CompanyGroup g{id, members.get<std::vector<std::string>>()};
    std::sort(g.accounts.begin(), g.accounts.end());
    out.push_back(std::move(g));
  }
  return out;
}

Json ToJson(const TranscreationPair& p) {
  return {{"pair_id", p.pair_id()},
          {"t1", corpus::ToJson(p.t1)},
          {"u1", p.u1},
          {"t2", corpus::ToJson(p.t2)},
          {"u2", p.u2},
          {"cosine", p.cosine},
          {"company_group", p.company_group},
          {"percentile_gap", p.percentile_gap}};
}

TranscreationPair TranscreationPairFromJson(const Json& j) {
  TranscreationPair p;
  p.t1 = corpus::PostFromJson(j.at("t1"));
  p.u1 = j.at("u1").get<std::string>();
  p.t2 = corpus::PostFromJson(j.at("t2"));
  p.u2 = j.at("u2").get<std::string>();
  p.cosine = j.at("cosine").get<double>();
  p.company_group = j.at("company_group").get<std::string>();
  p.percentile_gap = j.value("percentile_gap", 0.0);
  return p;
}

std::vector<TranscreationPair> MineTranscreationPairs(
    const std::vector<PostRecord>& posts, const std::vector<CompanyGroup>& groups,
    providers::ProviderClient& embedder, const TranscreationThresholds& thresholds,
    std::size_t workers) {
  return MineTranscreationPairs(
      posts, groups,
      [&](const std::string& text) { return providers::EmbedText(text, embedder); },
      thresholds, workers);
}

std::vector<TranscreationPair> MineTranscreationPairs(
    const std::vector<PostRecord>& posts, const std::vector<CompanyGroup>& groups,
    const EmbedFn& embed, const TranscreationThresholds& thresholds,
    std::size_t workers) {
  std::map<std::string, std::vector<const PostRecord*>> by_account;
  for (const auto& p : posts) by_account[p.account_id].push_back(&p);

  std::vector<std::vector<TranscreationPair>> per_group(groups.size());
  ParallelFor(groups.size(), workers, [&](std::size_t g) {
    std::vector<const PostRecord*> members;
    for (const auto& acct : groups[g].accounts) {
      auto it = by_account.find(acct);
      if (it != by_account.end()) {
        members.insert(members.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(members.begin(), members.end(), [](auto* a, auto* b) {
      return std::tie(a->account_id, a->created_at, a->post_id) <
             std::tie(b->account_id, b->created_at, b->post_id);
    });
    std::unordered_map<std::string, providers::EmbeddingVector> memo;
    auto vec = [&](const PostRecord& p) -> const providers::EmbeddingVector& {
      auto it = memo.find(p.post_id);
      if (it == memo.end()) it = memo.emplace(p.post_id, embed(p.text)).first;
      return it->second;
    };
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const PostRecord* a = members[i];
        const PostRecord* b = members[j];
        if (a->account_id == b->account_id) continue;
        double pa = Percentile(*a), pb = Percentile(*b);
        bool a_low = pa != pb ? pa < pb
                              : std::tie(a->created_at, a->post_id) <
                                    std::tie(b->created_at, b->post_id);
        const PostRecord& t1 = a_low ? *a : *b;
        const PostRecord& t2 = a_low ? *b : *a;
        double gap = Percentile(t2) - Percentile(t1);
        if (gap < thresholds.delta_percentile_min) continue;
        double cos = simtext::CosineSimilarity(vec(t1), vec(t2)).value;
        if (!(cos > thresholds.cosine_min)) continue;
        per_group[g].push_back(
            {t1, t1.account_id, t2, t2.account_id, cos, groups[g].group_id, gap});
      }
    }
  });

  std::vector<TranscreationPair> all;
  for (auto& v : per_group) {
    for (auto& p : v) all.push_back(std::move(p));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.percentile_gap != y.percentile_gap) return x.percentile_gap > y.percentile_gap;
    return std::tie(x.t1.post_id, x.t2.post_id) < std::tie(y.t1.post_id, y.t2.post_id);
  });
  std::unordered_map<std::string, int> uses;
  std::vector<TranscreationPair> kept;
  for (auto& p : all) {
    int& u1 = uses[p.t1.post_id];
    int& u2 = uses[p.t2.post_id];
    if (u1 >= thresholds.max_pairs_per_post || u2 >= thresholds.max_pairs_per_post) {
      continue;
    }
    ++u1;
    ++u2;
    kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
    return std::tie(x.company_group, x.u1, x.t1.created_at, x.t1.post_id, x.t2.post_id) <
           std::tie(y.company_group, y.u1, y.t1.created_at, y.t1.post_id, y.t2.post_id);
  });
  return kept;
}

void WriteTranscreationPairs(const std::filesystem::path& path,
                             const std::vector<TranscreationPair>& pairs) {
  std::vector<Json> lines;
  for (const auto& p : pairs) lines.push_back(ToJson(p));
  WriteJsonLinesFile(path, lines);
}

std::vector<TranscreationPair> ReadTranscreationPairs(
    const std::filesystem::path& path) {
  std::vector<TranscreationPair> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(TranscreationPairFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("pair at line " + std::to_string(line.line) + ": " + e.what(),
                       line.line);
    }
  }
  return out;
}

}  // namespace persuasion::transcreate
