#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embrel {

// surface form -> lemma; absent surface forms pass through unchanged.
using LemmaMap = std::unordered_map<std::string, std::string>;

// Normalizes a raw post to lowercase letter tokens separated by single
// spaces, in source order:
//   1. HTML tags (<...>) are replaced by a space; an unclosed '<' strips to
//      the end of the line,
//   2. whitespace-delimited tokens starting with http://, https:// or www.
//      are removed,
//   3. every remaining character that is not a letter becomes a space,
//   4. letters are lowercased and whitespace runs collapse to one space.
// Letter classification and lowercasing cover the Latin, Greek and Cyrillic
// blocks; letters of other scripts pass through unchanged. Idempotent and
// total on arbitrary UTF-8 (invalid bytes are treated as non-letters).
std::string clean_text(std::string_view raw);

// Splits on whitespace runs. Expects cleaned text; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view cleaned);

// Replaces each token by its lemma when the map has one. Length-preserving.
std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaMap& lemmas);

// Two-column UTF-8 TSV `surface<TAB>lemma`; '#'-prefixed lines are comments.
// Rows without a tab or with an empty column raise ParseError.
LemmaMap load_lemmas(std::istream& in);

// Code-point helpers used by clean_text; exposed for reuse in tests.
bool is_letter_cp(char32_t cp);
char32_t to_lower_cp(char32_t cp);

}  // namespace embrel
