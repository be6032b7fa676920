#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace longform {

// Base for every error the library raises. Alignment failures are not
// exceptions; see ctc_align.hpp.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class MalformedWav : public Error {
public:
    MalformedWav(std::uint64_t offset, const std::string& what)
        : Error("malformed WAV at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class EmptyAudio : public Error {
public:
    EmptyAudio() : Error("audio contains zero frames") {}
};

class RequiresMono : public Error {
public:
    explicit RequiresMono(int channels)
        : Error("operation requires mono audio, got " + std::to_string(channels) + " channels") {}
};

class UnknownGrapheme : public Error {
public:
    UnknownGrapheme(std::size_t position, std::string grapheme)
        : Error("unknown grapheme '" + grapheme + "' at position " + std::to_string(position)),
          position_(position), grapheme_(std::move(grapheme)) {}
    std::size_t position() const noexcept { return position_; }
    const std::string& grapheme() const noexcept { return grapheme_; }

private:
    std::size_t position_;
    std::string grapheme_;
};

class EmptyTokenization : public Error {
public:
    explicit EmptyTokenization(const std::string& word)
        : Error("no token matched in word '" + word + "'") {}
};

class MalformedEmissions : public Error {
public:
    using Error::Error;
};

// A valid Viterbi path left a word without frames.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

class WordTooLong : public Error {
public:
    WordTooLong(std::size_t index, double duration)
        : Error("word " + std::to_string(index) + " lasts " + std::to_string(duration) +
                " s, not below the chunk limit"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class ChunkOutOfRange : public Error {
public:
    using Error::Error;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& name)
        : Error("missing CSV column: " + name), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& what)
        : Error("malformed CSV row at line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class OverlapWithinSpeaker : public Error {
public:
    OverlapWithinSpeaker(std::size_t first_line, std::size_t second_line, const std::string& speaker)
        : Error("same-speaker overlap for '" + speaker + "' between lines " +
                std::to_string(first_line) + " and " + std::to_string(second_line)),
          lines_{first_line, second_line} {}
    const std::vector<std::size_t>& lines() const noexcept { return lines_; }

private:
    std::vector<std::size_t> lines_;
};

class MalformedRttmLine : public Error {
public:
    MalformedRttmLine(std::size_t line, const std::string& what)
        : Error("malformed RTTM line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus contains no pairs") {}
};

}  // namespace longform
