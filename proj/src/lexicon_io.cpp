#include "mdsift/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mdsift/errors.hpp"
#include "mdsift/report_io.hpp"

namespace mdsift {

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void validate_lexeme(const SignLexeme& lex) {
  if (lex.gloss.empty()) {
    throw DomainError("lexicon: gloss must be non-empty");
  }
  if (lex.expected_handedness != 1 && lex.expected_handedness != 2) {
    throw DomainError("lexicon: handedness must be 1 or 2 for '" + lex.gloss + "'");
  }
  if (lex.expected_strokes < 1) {
    throw DomainError("lexicon: strokes must be >= 1 for '" + lex.gloss + "'");
  }
}

}  // namespace

std::vector<SignLexeme> read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(ParseError::Kind::io, "read_lexicon: cannot open " + path.string());
  }

  std::vector<SignLexeme> lexicon;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;

    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(ParseError::Kind::bad_record,
                       "read_lexicon: " + where + ": not JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("gloss") || !j["gloss"].is_string() ||
        !j.contains("handedness") || !j["handedness"].is_number_integer() ||
        !j.contains("strokes") || !j["strokes"].is_number_integer()) {
      throw ParseError(ParseError::Kind::bad_record,
                       "read_lexicon: " + where +
                           ": need {\"gloss\": str, \"handedness\": int, \"strokes\": int}");
    }

    SignLexeme lex;
    lex.gloss = j["gloss"].get<std::string>();
    lex.expected_handedness = j["handedness"].get<int>();
    lex.expected_strokes = j["strokes"].get<int>();
    try {
      validate_lexeme(lex);
    } catch (const DomainError& e) {
      throw ParseError(ParseError::Kind::bad_record,
                       "read_lexicon: " + where + ": " + e.what());
    }
    if (!seen.insert(lex.gloss).second) {
      throw ParseError(ParseError::Kind::bad_record,
                       "read_lexicon: " + where + ": duplicate gloss '" + lex.gloss + "'");
    }
    lexicon.push_back(std::move(lex));
  }
  if (in.bad()) {
    throw ParseError(ParseError::Kind::io, "read_lexicon: read failed for " + path.string());
  }
  return lexicon;
}

void write_lexicon(const std::filesystem::path& path, const std::vector<SignLexeme>& lexicon) {
  std::set<std::string> seen;
  for (const auto& lex : lexicon) {
    validate_lexeme(lex);
    if (!seen.insert(lex.gloss).second) {
      throw DomainError("write_lexicon: duplicate gloss '" + lex.gloss + "'");
    }
  }

  std::ostringstream out;
  for (const auto& lex : lexicon) {
    nlohmann::json j;
    j["gloss"] = lex.gloss;
    j["handedness"] = lex.expected_handedness;
    j["strokes"] = lex.expected_strokes;
    out << j.dump() << '\n';
  }
  atomic_write_text(path, out.str());
}

}  // namespace mdsift
