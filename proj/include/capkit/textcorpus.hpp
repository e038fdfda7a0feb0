#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace capkit::textcorpus {

using Token = std::string;  // lowercase, alphanumeric, never empty

struct Caption {
    std::vector<Token> tokens;
    std::string raw;
};

struct CorpusRecord {
    std::string image_id;
    std::vector<Caption> captions;
};

using Corpus = std::vector<CorpusRecord>;

struct VocabConfig {
    int min_count = 4;
};

// Token <-> id mapping with reserved special ids. Ids are contiguous,
// specials first, then corpus tokens by descending frequency (ties broken
// lexicographically) so identical corpora always yield identical tables.
class Vocabulary {
  public:
    static constexpr int kPad = 0;
    static constexpr int kStart = 1;
    static constexpr int kEnd = 2;
    static constexpr int kUnk = 3;

    static const std::string& pad_token();
    static const std::string& start_token();
    static const std::string& end_token();
    static const std::string& unk_token();

    Vocabulary();

    // Adds a non-special token with its corpus count. Tokens must arrive in
    // final id order; used by the builder and the file loader.
    void append_token(const Token& token, std::int64_t count);

    int id_of(const Token& token) const;  // kUnk for out-of-vocab
    bool contains(const Token& token) const;
    const Token& token_of(int id) const;
    std::int64_t count_of(const Token& token) const;  // 0 if absent
    std::size_t size() const { return id_to_token_.size(); }
    int min_count() const { return min_count_; }
    void set_min_count(int m) { min_count_ = m; }

    const std::vector<Token>& id_to_token() const { return id_to_token_; }

  private:
    std::unordered_map<Token, int> token_to_id_;
    std::vector<Token> id_to_token_;
    std::vector<std::int64_t> counts_;  // by id, 0 for specials
    int min_count_ = 1;
};

enum class CaptionFileFormat { flickr8k, conceptual };

// Lowercase, strip everything outside [a-z0-9] (treated as separators),
// split on the resulting gaps.
std::vector<Token> tokenize(const std::string& raw);

Caption make_caption(const std::string& raw);

Vocabulary build_vocab(const Corpus& corpus, const VocabConfig& config);

// [START] + token ids (UNK for out-of-vocab) + [END]
std::vector<int> encode(const Caption& caption, const Vocabulary& vocab);
std::vector<Token> decode(const std::vector<int>& ids, const Vocabulary& vocab);

// flickr8k: `image_id#index<TAB>caption`, captions grouped per image_id.
// conceptual: `caption<TAB>image_id_or_url`, one caption per record.
// Accepts LF and CRLF. Throws MalformedLine / EmptyFile.
Corpus load_captions_tsv(const std::string& path, CaptionFileFormat format);

// One `id<TAB>token<TAB>count` line per entry, ids ascending.
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path);

}  // namespace capkit::textcorpus
