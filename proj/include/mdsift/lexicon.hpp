#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mdsift {

/// One lexicon entry: the labels a candidate sample is validated against.
struct SignLexeme {
  std::string gloss;
  int expected_handedness = 1;  // 1 or 2
  int expected_strokes = 1;     // >= 1
};

/// JSON Lines, one {"gloss", "handedness", "strokes"} object per line.
/// Glosses must be unique; blank lines are ignored. Throws ParseError.
std::vector<SignLexeme> read_lexicon(const std::filesystem::path& path);

/// Writes via a temp file and atomic rename.
void write_lexicon(const std::filesystem::path& path, const std::vector<SignLexeme>& lexicon);

}  // namespace mdsift
