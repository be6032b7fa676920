#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace longform {

using TokenId = int;

enum class UnknownPolicy { error, skip };

// Grapheme-to-token map used to turn transcript words into aligner tokens.
// Keys are stored NFC-normalized so they match normalized transcripts.
class TokenTable {
public:
    TokenTable() = default;
    // Throws InvalidArgument if the table breaks an invariant (empty key,
    // an entry mapping to blank_id, ids not dense in [0, V)).
    TokenTable(std::map<std::string, TokenId> entries, TokenId blank_id,
               UnknownPolicy policy = UnknownPolicy::skip);

    // UTF-8 text, one `grapheme<TAB>id` per line. `#` starts a comment line.
    // The special key `<blank>` sets blank_id (default 0).
    static TokenTable load(const std::filesystem::path& path, UnknownPolicy policy = UnknownPolicy::skip);
    static TokenTable parse(std::string_view text, UnknownPolicy policy = UnknownPolicy::skip);

    const std::map<std::string, TokenId>& entries() const { return entries_; }
    TokenId blank_id() const { return blank_id_; }
    UnknownPolicy unknown_policy() const { return policy_; }
    void set_unknown_policy(UnknownPolicy policy) { policy_ = policy; }
    // Vocabulary size V, blank included.
    std::size_t vocab_size() const { return vocab_size_; }
    // Longest key, in code points.
    std::size_t max_key_length() const { return max_key_cps_; }

private:
    std::map<std::string, TokenId> entries_;
    TokenId blank_id_ = 0;
    UnknownPolicy policy_ = UnknownPolicy::skip;
    std::size_t vocab_size_ = 1;
    std::size_t max_key_cps_ = 0;
};

std::string nfc(std::string_view utf8);

// NFC, then trim and collapse every run of Unicode whitespace to one space.
std::string normalize_transcript(std::string_view text);

std::vector<std::string> split_words(std::string_view text);

// Greedy longest-match-first scan. `skipped` counts unknown code points
// dropped under the skip policy.
std::vector<TokenId> tokenize_word(std::string_view word, const TokenTable& table, std::size_t& skipped);
std::vector<TokenId> tokenize_word(std::string_view word, const TokenTable& table);

}  // namespace longform
