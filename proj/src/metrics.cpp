#include "capkit/metrics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "capkit/error.hpp"
#include "capkit/textcorpus.hpp"

namespace capkit::metrics {

namespace {

using NgramCounts = std::unordered_map<std::string, long>;

std::string ngram_key(const TokenSeq& s, std::size_t pos, int n) {
    std::string key;
    for (int k = 0; k < n; ++k) {
        if (k) key.push_back('\x1f');
        key += s[pos + static_cast<std::size_t>(k)];
    }
    return key;
}

NgramCounts count_ngrams(const TokenSeq& s, int n) {
    NgramCounts counts;
    if (s.size() >= static_cast<std::size_t>(n)) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
            ++counts[ngram_key(s, i, n)];
        }
    }
    return counts;
}

std::size_t ngram_total(const TokenSeq& s, int n) {
    return s.size() >= static_cast<std::size_t>(n) ? s.size() - static_cast<std::size_t>(n) + 1 : 0;
}

// Brevity reference: length closest to the candidate, ties to the shorter.
std::size_t brevity_reference_length(std::size_t cand_len, const std::vector<TokenSeq>& refs) {
    std::size_t best_len = refs.front().size();
    auto diff = [cand_len](std::size_t len) {
        return len > cand_len ? len - cand_len : cand_len - len;
    };
    for (const auto& r : refs) {
        std::size_t len = r.size();
        if (diff(len) < diff(best_len) || (diff(len) == diff(best_len) && len < best_len)) {
            best_len = len;
        }
    }
    return best_len;
}

bool syn_match(const std::string& a, const std::string& b, const SynonymTable& table) {
    if (auto it = table.find(a); it != table.end() && it->second.count(b)) return true;
    if (auto it = table.find(b); it != table.end() && it->second.count(a)) return true;
    return false;
}

bool unigram_match(const std::string& a, const std::string& b, const SynonymTable& table) {
    return a == b || syn_match(a, b, table);
}

struct Alignment {
    int exact = 0;
    int total = 0;
    int chunks = 0;
};

int count_chunks(const std::vector<int>& cand_to_ref) {
    int chunks = 0;
    int prev_j = -2;
    bool prev_matched = false;
    for (std::size_t i = 0; i < cand_to_ref.size(); ++i) {
        int j = cand_to_ref[i];
        if (j < 0) {
            prev_matched = false;
            continue;
        }
        if (!(prev_matched && j == prev_j + 1)) ++chunks;
        prev_j = j;
        prev_matched = true;
    }
    return chunks;
}

// Minimum chunk count over the alignments that realize m_exact exact pairs
// and m_total pairs overall. Exact branch-and-bound, seeded with a greedy
// alignment as the upper bound; the node budget is a safety valve for
// pathological long repeated inputs (never reached at caption lengths).
class ChunkSearch {
  public:
    ChunkSearch(const TokenSeq& cand, const TokenSeq& ref, const SynonymTable& syn, int m_exact,
                int m_total)
        : c_(cand), r_(ref), syn_(syn), m_exact_(m_exact), m_total_(m_total) {}

    int run(const std::vector<int>& greedy_assignment) {
        best_ = count_chunks(greedy_assignment);
        used_.assign(r_.size(), 0);
        dfs(0, 0, 0, -2, false, 0);
        return best_;
    }

  private:
    static constexpr long kNodeBudget = 4000000;

    void dfs(std::size_t i, int matched, int exact, int last_j, bool prev_matched, int chunks) {
        if (nodes_ > kNodeBudget) return;
        ++nodes_;
        if (chunks >= best_) return;
        std::size_t remaining = c_.size() - i;
        if (matched + static_cast<int>(remaining) < m_total_) return;
        if (exact + static_cast<int>(remaining) < m_exact_) return;
        if (i == c_.size()) {
            if (matched == m_total_ && exact == m_exact_) best_ = std::min(best_, chunks);
            return;
        }
        // Continuing the previous run costs no chunk; try it first.
        int cont_j = prev_matched ? last_j + 1 : -1;
        if (cont_j >= 0 && cont_j < static_cast<int>(r_.size()) &&
            !used_[static_cast<std::size_t>(cont_j)] &&
            unigram_match(c_[i], r_[static_cast<std::size_t>(cont_j)], syn_)) {
            used_[static_cast<std::size_t>(cont_j)] = 1;
            dfs(i + 1, matched + 1, exact + (c_[i] == r_[static_cast<std::size_t>(cont_j)]),
                cont_j, true, chunks);
            used_[static_cast<std::size_t>(cont_j)] = 0;
        }
        for (int j = 0; j < static_cast<int>(r_.size()); ++j) {
            if (j == cont_j || used_[static_cast<std::size_t>(j)]) continue;
            if (!unigram_match(c_[i], r_[static_cast<std::size_t>(j)], syn_)) continue;
            used_[static_cast<std::size_t>(j)] = 1;
            dfs(i + 1, matched + 1, exact + (c_[i] == r_[static_cast<std::size_t>(j)]), j, true,
                chunks + 1);
            used_[static_cast<std::size_t>(j)] = 0;
        }
        dfs(i + 1, matched, exact, -2, false, chunks);
    }

    const TokenSeq& c_;
    const TokenSeq& r_;
    const SynonymTable& syn_;
    int m_exact_;
    int m_total_;
    int best_ = INT_MAX;
    long nodes_ = 0;
    std::vector<char> used_;
};

Alignment align_unigrams(const TokenSeq& cand, const TokenSeq& ref, const SynonymTable& syn) {
    Alignment out;
    if (cand.empty() || ref.empty()) return out;

    // Exact stage: per token type, min of the two occurrence counts.
    std::unordered_map<std::string, int> cand_counts, ref_counts;
    for (const auto& t : cand) ++cand_counts[t];
    for (const auto& t : ref) ++ref_counts[t];
    std::unordered_map<std::string, int> exact_quota;
    int m_exact = 0;
    for (const auto& [tok, n] : cand_counts) {
        auto it = ref_counts.find(tok);
        if (it != ref_counts.end()) {
            int q = std::min(n, it->second);
            exact_quota[tok] = q;
            m_exact += q;
        }
    }

    // Greedy positional pairing for the exact stage: k-th occurrence to
    // k-th occurrence. Doubles as the chunk-search upper bound.
    std::vector<int> assignment(cand.size(), -1);
    std::vector<char> ref_used(ref.size(), 0);
    {
        std::unordered_map<std::string, int> taken;
        std::unordered_map<std::string, std::vector<int>> ref_positions;
        for (std::size_t j = 0; j < ref.size(); ++j) {
            ref_positions[ref[j]].push_back(static_cast<int>(j));
        }
        for (std::size_t i = 0; i < cand.size(); ++i) {
            auto qit = exact_quota.find(cand[i]);
            if (qit == exact_quota.end()) continue;
            int& k = taken[cand[i]];
            if (k >= qit->second) continue;
            int j = ref_positions[cand[i]][static_cast<std::size_t>(k)];
            assignment[i] = j;
            ref_used[static_cast<std::size_t>(j)] = 1;
            ++k;
        }
    }

    // Synonym stage on the leftovers: maximum matching so the match count
    // is canonical.
    int m_syn = 0;
    if (!syn.empty()) {
        std::vector<int> left_pos, right_pos;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (assignment[i] < 0) left_pos.push_back(static_cast<int>(i));
        }
        for (std::size_t j = 0; j < ref.size(); ++j) {
            if (!ref_used[j]) right_pos.push_back(static_cast<int>(j));
        }
        std::vector<std::vector<int>> adj(left_pos.size());
        for (std::size_t u = 0; u < left_pos.size(); ++u) {
            for (std::size_t v = 0; v < right_pos.size(); ++v) {
                if (syn_match(cand[static_cast<std::size_t>(left_pos[u])],
                              ref[static_cast<std::size_t>(right_pos[v])], syn)) {
                    adj[u].push_back(static_cast<int>(v));
                }
            }
        }
        // Rerun Kuhn tracking the assignment for the greedy upper bound.
        std::vector<int> match_right(right_pos.size(), -1);
        std::vector<char> visited;
        std::function<bool(int)> try_kuhn = [&](int u) -> bool {
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (visited[static_cast<std::size_t>(v)]) continue;
                visited[static_cast<std::size_t>(v)] = 1;
                if (match_right[static_cast<std::size_t>(v)] < 0 ||
                    try_kuhn(match_right[static_cast<std::size_t>(v)])) {
                    match_right[static_cast<std::size_t>(v)] = u;
                    return true;
                }
            }
            return false;
        };
        for (std::size_t u = 0; u < left_pos.size(); ++u) {
            visited.assign(right_pos.size(), 0);
            if (try_kuhn(static_cast<int>(u))) ++m_syn;
        }
        for (std::size_t v = 0; v < right_pos.size(); ++v) {
            if (match_right[v] >= 0) {
                assignment[static_cast<std::size_t>(left_pos[static_cast<std::size_t>(
                    match_right[v])])] = right_pos[v];
            }
        }
    }

    out.exact = m_exact;
    out.total = m_exact + m_syn;
    if (out.total > 0) {
        out.chunks = ChunkSearch(cand, ref, syn, m_exact, out.total).run(assignment);
    }
    return out;
}

std::string fmt_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

}  // namespace

double bleu(const SentencePair& pair, const MetricConfig& config) {
    const TokenSeq& c = pair.candidate;
    if (c.empty() || pair.references.empty()) return 0.0;

    std::size_t ref_len = brevity_reference_length(c.size(), pair.references);
    double brevity =
        ref_len == 0 ? 1.0
                     : std::min(1.0, static_cast<double>(c.size()) / static_cast<double>(ref_len));

    double log_sum = 0.0;
    int orders = 0;
    for (int n = 1; n <= config.max_n; ++n) {
        std::size_t total = ngram_total(c, n);
        if (total == 0) continue;
        NgramCounts cand_counts = count_ngrams(c, n);
        NgramCounts max_ref_counts;
        for (const auto& r : pair.references) {
            for (const auto& [key, cnt] : count_ngrams(r, n)) {
                long& slot = max_ref_counts[key];
                slot = std::max(slot, cnt);
            }
        }
        long clipped = 0;
        for (const auto& [key, cnt] : cand_counts) {
            auto it = max_ref_counts.find(key);
            if (it != max_ref_counts.end()) clipped += std::min(cnt, it->second);
        }
        if (clipped == 0) return 0.0;
        log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
        ++orders;
    }
    if (orders == 0) return 0.0;
    return brevity * std::exp(log_sum / orders);
}

double gleu(const SentencePair& pair, const MetricConfig& config) {
    const TokenSeq& c = pair.candidate;
    if (c.empty() || pair.references.empty()) return 0.0;

    NgramCounts cand_pool;
    std::size_t cand_pool_size = 0;
    for (int n = 1; n <= config.max_n; ++n) {
        for (const auto& [key, cnt] : count_ngrams(c, n)) cand_pool[key] += cnt;
        cand_pool_size += ngram_total(c, n);
    }
    if (cand_pool_size == 0) return 0.0;

    double best = 0.0;
    for (const auto& r : pair.references) {
        NgramCounts ref_pool;
        std::size_t ref_pool_size = 0;
        for (int n = 1; n <= config.max_n; ++n) {
            for (const auto& [key, cnt] : count_ngrams(r, n)) ref_pool[key] += cnt;
            ref_pool_size += ngram_total(r, n);
        }
        if (ref_pool_size == 0) continue;
        long matches = 0;
        for (const auto& [key, cnt] : cand_pool) {
            auto it = ref_pool.find(key);
            if (it != ref_pool.end()) matches += std::min(cnt, it->second);
        }
        double precision = static_cast<double>(matches) / static_cast<double>(cand_pool_size);
        double recall = static_cast<double>(matches) / static_cast<double>(ref_pool_size);
        best = std::max(best, std::min(precision, recall));
    }
    return best;
}

MeteorComputation meteor_against(const TokenSeq& candidate, const TokenSeq& reference,
                                 const MetricConfig& config) {
    MeteorComputation out;
    if (candidate.empty() || reference.empty()) return out;
    Alignment a = align_unigrams(candidate, reference, config.synonym_table);
    out.matches = a.total;
    out.chunks = a.chunks;
    if (a.total == 0) return out;
    out.precision = static_cast<double>(a.total) / static_cast<double>(candidate.size());
    out.recall = static_cast<double>(a.total) / static_cast<double>(reference.size());
    out.f_mean = out.precision * out.recall /
                 (config.meteor_alpha * out.precision + (1.0 - config.meteor_alpha) * out.recall);
    out.penalty = config.meteor_gamma *
                  std::pow(static_cast<double>(a.chunks) / static_cast<double>(a.total),
                           config.meteor_beta_exp);
    out.score = out.f_mean * (1.0 - out.penalty);
    return out;
}

double meteor(const SentencePair& pair, const MetricConfig& config) {
    if (pair.candidate.empty() || pair.references.empty()) return 0.0;
    double best = 0.0;
    for (const auto& r : pair.references) {
        best = std::max(best, meteor_against(pair.candidate, r, config).score);
    }
    return best;
}

namespace {

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            cur[j + 1] = a[i] == b[j] ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l(const SentencePair& pair, const MetricConfig& config) {
    const TokenSeq& c = pair.candidate;
    if (c.empty() || pair.references.empty()) return 0.0;
    double beta2 = config.rouge_beta * config.rouge_beta;
    double best = 0.0;
    for (const auto& r : pair.references) {
        if (r.empty()) continue;
        std::size_t L = lcs_length(c, r);
        if (L == 0) continue;
        double recall = static_cast<double>(L) / static_cast<double>(r.size());
        double precision = static_cast<double>(L) / static_cast<double>(c.size());
        double f = (1.0 + beta2) * recall * precision / (recall + beta2 * precision);
        best = std::max(best, f);
    }
    return best;
}

MetricReport score_corpus(const std::vector<ScoredPairInput>& pairs, const MetricConfig& config) {
    if (pairs.empty()) throw malformed_error("EmptyCorpus", "no sentence pairs to score");
    MetricReport report;
    report.per_sentence.reserve(pairs.size());
    for (const auto& p : pairs) {
        SentenceScores s;
        s.image_id = p.image_id;
        s.reference_count = p.pair.references.size();
        s.bleu = bleu(p.pair, config);
        s.gleu = gleu(p.pair, config);
        s.meteor = meteor(p.pair, config);
        s.rouge_l = rouge_l(p.pair, config);
        report.per_sentence.push_back(std::move(s));
    }
    double n = static_cast<double>(report.per_sentence.size());
    for (const auto& s : report.per_sentence) {
        report.avg_bleu += s.bleu;
        report.avg_gleu += s.gleu;
        report.avg_meteor += s.meteor;
        report.avg_rouge_l += s.rouge_l;
    }
    report.avg_bleu /= n;
    report.avg_gleu /= n;
    report.avg_meteor /= n;
    report.avg_rouge_l /= n;
    return report;
}

std::vector<ScoredPairInput> load_pairs_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("FileOpen", "cannot open pairs file: " + path);
    std::vector<ScoredPairInput> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() < 3) {
            throw malformed_error("MalformedLine",
                                  path + ":" + std::to_string(line_no) +
                                      ": expected image_id\\tcandidate\\treference...");
        }
        ScoredPairInput p;
        p.image_id = fields[0];
        p.pair.candidate = textcorpus::tokenize(fields[1]);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            p.pair.references.push_back(textcorpus::tokenize(fields[i]));
        }
        out.push_back(std::move(p));
    }
    if (out.empty()) throw malformed_error("EmptyFile", "pairs file has no content: " + path);
    return out;
}

void write_report_csv(const MetricReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("FileOpen", "cannot write report file: " + path);
    out << "image_id,bleu,gleu,meteor,rouge_l\n";
    for (const auto& s : report.per_sentence) {
        out << csv_field(s.image_id) << ',' << fmt_score(s.bleu) << ',' << fmt_score(s.gleu) << ','
            << fmt_score(s.meteor) << ',' << fmt_score(s.rouge_l) << '\n';
    }
    out << "AVERAGE," << fmt_score(report.avg_bleu) << ',' << fmt_score(report.avg_gleu) << ','
        << fmt_score(report.avg_meteor) << ',' << fmt_score(report.avg_rouge_l) << '\n';
    if (!out) throw io_error("FileWrite", "failed writing report file: " + path);
}

void write_report_text(const MetricReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("FileOpen", "cannot write report file: " + path);
    out << "pairs = " << report.per_sentence.size() << '\n';
    for (const auto& s : report.per_sentence) {
        out << "pair bleu=" << fmt_score(s.bleu) << " gleu=" << fmt_score(s.gleu)
            << " meteor=" << fmt_score(s.meteor) << " rouge_l=" << fmt_score(s.rouge_l)
            << " refs=" << s.reference_count << " id=" << s.image_id << '\n';
    }
    out << "average bleu=" << fmt_score(report.avg_bleu) << " gleu=" << fmt_score(report.avg_gleu)
        << " meteor=" << fmt_score(report.avg_meteor)
        << " rouge_l=" << fmt_score(report.avg_rouge_l) << '\n';
    if (!out) throw io_error("FileWrite", "failed writing report file: " + path);
}

SynonymTable load_synonym_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("FileOpen", "cannot open synonym file: " + path);
    SynonymTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw malformed_error("MalformedLine",
                                  path + ":" + std::to_string(line_no) + ": expected token\\tsyn,...");
        }
        std::string token = line.substr(0, tab);
        std::string rest = line.substr(tab + 1);
        auto& set = table[token];
        std::stringstream ss(rest);
        std::string syn;
        while (std::getline(ss, syn, ',')) {
            if (!syn.empty()) set.insert(syn);
        }
    }
    return table;
}

}  // namespace capkit::metrics
