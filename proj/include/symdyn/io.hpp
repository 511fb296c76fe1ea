#pragma once

#include <filesystem>
#include <string>

#include "symdyn/metrics.hpp"
#include "symdyn/process.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

// Process spec files are JSON objects:
//   {"kind": "iid",      "probabilities": [0.5, 0.5]}
//   {"kind": "markov",   "transition": [[0.9, 0.1], [0.2, 0.8]], "stationary": [...]?}
//   {"kind": "periodic", "period": "01" | [0, 1], "alphabet": 2?}
//   {"kind": "mixture",  "weights": [0.5, 0.5], "components": [{...}, {...}]}
ProcessSpec parse_spec(const std::string& json_text);
ProcessSpec load_spec(const std::filesystem::path& path);
std::string dump_spec(const ProcessSpec& spec);

enum class WordFormat { raw, rle };

// raw: one symbol per byte, no header; alphabet taken from `alphabet_hint`
//      or max symbol + 1 (at least 2).
// rle: text, first line "#symdyn-rle v1 alphabet=<l> length=<n>", then
//      whitespace-separated runs "<symbol>*<count>" (a bare "<symbol>" is a
//      run of one).
Word read_word(const std::filesystem::path& path, std::uint32_t alphabet_hint = 0);
void write_word(const Word& w, const std::filesystem::path& path, WordFormat fmt);
std::string encode_rle(const Word& w);
Word decode_rle(const std::string& text);

// Certificate files: one "<i> <i'>" pair per line.
MatchCertificate read_certificate(const std::filesystem::path& path);
void write_certificate(const MatchCertificate& cert, const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace symdyn
