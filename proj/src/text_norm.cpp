#include "longform/text_norm.hpp"
#include "longform/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <fstream>
#include <set>
#include <sstream>

namespace longform {
namespace {

// Byte offsets of every code point boundary, size = code points + 1.
std::vector<std::size_t> code_point_offsets(std::string_view s) {
    std::vector<std::size_t> offs;
    offs.reserve(s.size() + 1);
    int32_t i = 0;
    const auto len = static_cast<int32_t>(s.size());
    while (i < len) {
        offs.push_back(static_cast<std::size_t>(i));
        UChar32 c;
        U8_NEXT(s.data(), i, len, c);
    }
    offs.push_back(s.size());
    return offs;
}

std::string trim_ascii(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string nfc(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
    const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::UnicodeString dst = norm->normalize(src, status);
    if (U_FAILURE(status)) throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
    std::string out;
    dst.toUTF8String(out);
    return out;
}

std::string normalize_transcript(std::string_view text) {
    const std::string composed = nfc(text);
    std::string out;
    out.reserve(composed.size());
    bool pending_space = false;
    int32_t i = 0;
    const auto len = static_cast<int32_t>(composed.size());
    while (i < len) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(composed.data(), i, len, c);
        if (c >= 0 && u_isUWhiteSpace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.append(composed, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
    }
    return out;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto next = text.find(' ', pos);
        if (next == std::string_view::npos) next = text.size();
        if (next > pos) words.emplace_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return words;
}

TokenTable::TokenTable(std::map<std::string, TokenId> entries, TokenId blank_id, UnknownPolicy policy)
    : blank_id_(blank_id), policy_(policy) {
    if (blank_id < 0) throw InvalidArgument("blank id must be non-negative");
    std::set<TokenId> ids{blank_id};
    for (auto& [key, id] : entries) {
        if (key.empty()) throw InvalidArgument("token table key is empty");
        if (id < 0) throw InvalidArgument("token id for '" + key + "' is negative");
        if (id == blank_id) throw InvalidArgument("token table entry '" + key + "' maps to the blank id");
        std::string normalized = nfc(key);
        const std::size_t cps = code_point_offsets(normalized).size() - 1;
        max_key_cps_ = std::max(max_key_cps_, cps);
        ids.insert(id);
        auto [it, inserted] = entries_.emplace(std::move(normalized), id);
        if (!inserted && it->second != id)
            throw InvalidArgument("token table key '" + key + "' maps to two ids after NFC");
    }
    vocab_size_ = ids.size();
    if (*ids.rbegin() != static_cast<TokenId>(vocab_size_) - 1)
        throw InvalidArgument("token ids are not dense in [0, " + std::to_string(vocab_size_) + ")");
}

TokenTable TokenTable::parse(std::string_view text, UnknownPolicy policy) {
    std::map<std::string, TokenId> entries;
    TokenId blank = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_ascii(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw InvalidArgument("token table line " + std::to_string(lineno) + ": expected grapheme<TAB>id");
        const std::string key = line.substr(0, tab);
        const std::string id_text = trim_ascii(std::string_view(line).substr(tab + 1));
        TokenId id = 0;
        try {
            std::size_t used = 0;
            id = std::stoi(id_text, &used);
            if (used != id_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("token table line " + std::to_string(lineno) + ": bad id '" + id_text + "'");
        }
        if (key == "<blank>") {
            blank = id;
        } else if (!entries.emplace(key, id).second) {
            throw InvalidArgument("token table line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return TokenTable(std::move(entries), blank, policy);
}

TokenTable TokenTable::load(const std::filesystem::path& path, UnknownPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open token table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), policy);
}

std::vector<TokenId> tokenize_word(std::string_view word, const TokenTable& table, std::size_t& skipped) {
    if (word.empty()) throw InvalidArgument("cannot tokenize an empty word");
    const auto offs = code_point_offsets(word);
    const std::size_t n = offs.size() - 1;
    std::vector<TokenId> out;
    std::string key;
    std::size_t i = 0;
    while (i < n) {
        bool matched = false;
        for (std::size_t len = std::min(table.max_key_length(), n - i); len >= 1; --len) {
            key.assign(word.substr(offs[i], offs[i + len] - offs[i]));
            if (auto it = table.entries().find(key); it != table.entries().end()) {
                out.push_back(it->second);
                i += len;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (table.unknown_policy() == UnknownPolicy::error)
            throw UnknownGrapheme(i, std::string(word.substr(offs[i], offs[i + 1] - offs[i])));
        ++skipped;
        ++i;
    }
    if (out.empty()) throw EmptyTokenization(std::string(word));
    return out;
}

std::vector<TokenId> tokenize_word(std::string_view word, const TokenTable& table) {
    std::size_t skipped = 0;
    return tokenize_word(word, table, skipped);
}

}  // namespace longform
