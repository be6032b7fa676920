#pragma once

#include "longform/ctc_align.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace longform {

// Binary emission file, version 1, little-endian, packed:
//   "CTCE" | version u32 | T u64 | V u64 | blank_id u32 | frame_duration f64 | normalized u8
// followed by T*V f32 entries, row-major.
inline constexpr std::uint32_t kEmissionFormatVersion = 1;
inline constexpr std::size_t kEmissionHeaderBytes = 37;

EmissionMatrix decode_emissions_binary(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_emissions_binary(const EmissionMatrix& emissions);

// Debug format: one frame per line, space-separated values. Lines starting
// with '#' are comments and may carry `key=value` settings for blank_id,
// frame_duration and normalized. "-inf" is accepted.
EmissionMatrix parse_emissions_text(std::string_view text);

// Detects the format by the magic bytes. Throws MalformedEmissions/IoFailure.
EmissionMatrix read_emissions(const std::filesystem::path& path);
void write_emissions(const EmissionMatrix& emissions, const std::filesystem::path& path);

// One {"word","start","end","score"} object per line, times with three decimals.
std::string format_alignment_jsonl(std::span<const WordAlignment> words);
// Reads what format_alignment_jsonl writes. Throws InvalidArgument on bad records.
std::vector<WordAlignment> parse_alignment_jsonl(std::string_view text);

}  // namespace longform
