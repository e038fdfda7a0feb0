#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace capkit::metrics {

using TokenSeq = std::vector<std::string>;

struct SentencePair {
    TokenSeq candidate;
    std::vector<TokenSeq> references;  // >= 1
};

using SynonymTable = std::unordered_map<std::string, std::unordered_set<std::string>>;

struct MetricConfig {
    int max_n = 4;              // highest n-gram order for BLEU/GLEU
    double meteor_alpha = 0.9;  // recall weighting in F_mean
    double meteor_gamma = 0.5;  // fragmentation penalty weight
    double meteor_beta_exp = 3.0;
    double rouge_beta = 1.0;
    SynonymTable synonym_table;
};

// Unigram alignment summary backing the METEOR score. Exact matches take
// priority over synonym matches; among alignments realizing the maximal
// match count, the one with the fewest chunks is used.
struct MeteorComputation {
    int matches = 0;  // m
    int chunks = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_mean = 0.0;
    double penalty = 0.0;
    double score = 0.0;
};

double bleu(const SentencePair& pair, const MetricConfig& config);
double gleu(const SentencePair& pair, const MetricConfig& config);
double meteor(const SentencePair& pair, const MetricConfig& config);
double rouge_l(const SentencePair& pair, const MetricConfig& config);

// Alignment detail against a single reference (used by meteor; exposed for
// tests and reporting).
MeteorComputation meteor_against(const TokenSeq& candidate, const TokenSeq& reference,
                                 const MetricConfig& config);

struct SentenceScores {
    std::string image_id;
    std::size_t reference_count = 0;
    double bleu = 0.0;
    double gleu = 0.0;
    double meteor = 0.0;
    double rouge_l = 0.0;
};

struct MetricReport {
    std::vector<SentenceScores> per_sentence;
    double avg_bleu = 0.0;
    double avg_gleu = 0.0;
    double avg_meteor = 0.0;
    double avg_rouge_l = 0.0;
};

struct ScoredPairInput {
    std::string image_id;
    SentencePair pair;
};

MetricReport score_corpus(const std::vector<ScoredPairInput>& pairs, const MetricConfig& config);

// `image_id<TAB>candidate<TAB>reference[<TAB>reference...]`, tokenized with
// the corpus tokenizer.
std::vector<ScoredPairInput> load_pairs_tsv(const std::string& path);

// CSV: header image_id,bleu,gleu,meteor,rouge_l then one row per sentence
// and a final AVERAGE row.
void write_report_csv(const MetricReport& report, const std::string& path);
// Structured-text variant with the same fields plus reference counts.
void write_report_text(const MetricReport& report, const std::string& path);

// One `token<TAB>syn1,syn2,...` line per entry.
SynonymTable load_synonym_table(const std::string& path);

}  // namespace capkit::metrics
