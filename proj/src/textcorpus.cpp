#include "capkit/textcorpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "capkit/error.hpp"

namespace capkit::textcorpus {

const std::string& Vocabulary::pad_token() {
    static const std::string t = "<pad>";
    return t;
}
const std::string& Vocabulary::start_token() {
    static const std::string t = "<start>";
    return t;
}
const std::string& Vocabulary::end_token() {
    static const std::string t = "<end>";
    return t;
}
const std::string& Vocabulary::unk_token() {
    static const std::string t = "<unk>";
    return t;
}

Vocabulary::Vocabulary() {
    const std::string specials[] = {pad_token(), start_token(), end_token(), unk_token()};
    for (const auto& s : specials) {
        token_to_id_[s] = static_cast<int>(id_to_token_.size());
        id_to_token_.push_back(s);
        counts_.push_back(0);
    }
}

void Vocabulary::append_token(const Token& token, std::int64_t count) {
    if (token_to_id_.count(token)) {
        throw internal_error("DuplicateToken", "token already in vocabulary: " + token);
    }
    token_to_id_[token] = static_cast<int>(id_to_token_.size());
    id_to_token_.push_back(token);
    counts_.push_back(count);
}

int Vocabulary::id_of(const Token& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(const Token& token) const {
    return token_to_id_.count(token) != 0;
}

const Token& Vocabulary::token_of(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
        throw internal_error("BadTokenId", "id out of range: " + std::to_string(id));
    }
    return id_to_token_[static_cast<std::size_t>(id)];
}

std::int64_t Vocabulary::count_of(const Token& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? 0 : counts_[static_cast<std::size_t>(it->second)];
}

std::vector<Token> tokenize(const std::string& raw) {
    std::vector<Token> out;
    std::string cur;
    for (unsigned char ch : raw) {
        if (std::isalnum(ch)) {
            cur.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Caption make_caption(const std::string& raw) {
    return Caption{tokenize(raw), raw};
}

Vocabulary build_vocab(const Corpus& corpus, const VocabConfig& config) {
    if (config.min_count < 1) {
        throw malformed_error("BadVocabConfig",
                              "min_count must be >= 1, got " + std::to_string(config.min_count));
    }
    std::unordered_map<Token, std::int64_t> freq;
    for (const auto& rec : corpus) {
        for (const auto& cap : rec.captions) {
            for (const auto& tok : cap.tokens) ++freq[tok];
        }
    }
    // Descending frequency, then lexicographic: deterministic id assignment.
    std::vector<std::pair<Token, std::int64_t>> kept;
    kept.reserve(freq.size());
    for (const auto& [tok, n] : freq) {
        if (n >= config.min_count) kept.emplace_back(tok, n);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary vocab;
    vocab.set_min_count(config.min_count);
    for (const auto& [tok, n] : kept) vocab.append_token(tok, n);
    return vocab;
}

std::vector<int> encode(const Caption& caption, const Vocabulary& vocab) {
    std::vector<int> ids;
    ids.reserve(caption.tokens.size() + 2);
    ids.push_back(Vocabulary::kStart);
    for (const auto& tok : caption.tokens) ids.push_back(vocab.id_of(tok));
    ids.push_back(Vocabulary::kEnd);
    return ids;
}

std::vector<Token> decode(const std::vector<int>& ids, const Vocabulary& vocab) {
    std::vector<Token> out;
    for (int id : ids) {
        if (id == Vocabulary::kStart || id == Vocabulary::kEnd || id == Vocabulary::kPad) continue;
        out.push_back(vocab.token_of(id));
    }
    return out;
}

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Corpus load_captions_tsv(const std::string& path, CaptionFileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("FileOpen", "cannot open caption file: " + path);

    Corpus records;
    std::map<std::string, std::size_t> flickr_index;  // image_id -> records slot
    std::string line;
    std::size_t line_no = 0;
    bool any_line = false;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        any_line = true;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw malformed_error("MalformedLine",
                                  path + ":" + std::to_string(line_no) + ": no TAB separator");
        }
        std::string left = line.substr(0, tab);
        std::string right = line.substr(tab + 1);
        if (format == CaptionFileFormat::conceptual) {
            // caption<TAB>image_id
            if (right.empty()) {
                throw malformed_error("MalformedLine",
                                      path + ":" + std::to_string(line_no) + ": empty image id");
            }
            records.push_back(CorpusRecord{right, {make_caption(left)}});
        } else {
            // image_id#index<TAB>caption
            auto hash = left.rfind('#');
            if (hash == std::string::npos || hash == 0) {
                throw malformed_error("MalformedLine", path + ":" + std::to_string(line_no) +
                                                           ": expected image_id#index before TAB");
            }
            std::string image_id = left.substr(0, hash);
            auto it = flickr_index.find(image_id);
            if (it == flickr_index.end()) {
                flickr_index[image_id] = records.size();
                records.push_back(CorpusRecord{image_id, {make_caption(right)}});
            } else {
                records[it->second].captions.push_back(make_caption(right));
            }
        }
    }
    if (!any_line) throw malformed_error("EmptyFile", "caption file has no content: " + path);
    return records;
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("FileOpen", "cannot write vocabulary file: " + path);
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        const auto& tok = vocab.token_of(static_cast<int>(id));
        out << id << '\t' << tok << '\t' << vocab.count_of(tok) << '\n';
    }
    if (!out) throw io_error("FileWrite", "failed writing vocabulary file: " + path);
}

Vocabulary load_vocab(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("FileOpen", "cannot open vocabulary file: " + path);
    Vocabulary vocab;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_s, tok, count_s;
        if (!std::getline(ss, id_s, '\t') || !std::getline(ss, tok, '\t') ||
            !std::getline(ss, count_s, '\t')) {
            throw malformed_error("MalformedLine",
                                  path + ":" + std::to_string(line_no) + ": expected id\\ttoken\\tcount");
        }
        std::size_t id = 0;
        std::int64_t count = 0;
        try {
            id = static_cast<std::size_t>(std::stoll(id_s));
            count = std::stoll(count_s);
        } catch (const std::exception&) {
            throw malformed_error("MalformedLine",
                                  path + ":" + std::to_string(line_no) + ": bad id or count");
        }
        if (id < 4) {
            const std::string expected[] = {Vocabulary::pad_token(), Vocabulary::start_token(),
                                            Vocabulary::end_token(), Vocabulary::unk_token()};
            if (tok != expected[id]) {
                throw malformed_error("MalformedLine", path + ":" + std::to_string(line_no) +
                                                           ": special token mismatch at id " +
                                                           std::to_string(id));
            }
            continue;
        }
        if (id != vocab.size()) {
            throw malformed_error("MalformedLine", path + ":" + std::to_string(line_no) +
                                                       ": ids must be ascending and contiguous");
        }
        vocab.append_token(tok, count);
    }
    return vocab;
}

}  // namespace capkit::textcorpus
