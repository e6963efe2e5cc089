#include "embrel/textproc.hpp"

#include <array>
#include <cstdint>

#include "embrel/errors.hpp"

namespace embrel {

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Decodes one UTF-8 code point starting at s[i] and advances i.
// Malformed sequences decode to U+FFFD one byte at a time, keeping the
// function total on arbitrary input.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool starts_with_icase(std::string_view token, std::string_view prefix) {
    if (token.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = token[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
        if (c != prefix[i]) return false;
    }
    return true;
}

bool is_hyperlink(std::string_view token) {
    return starts_with_icase(token, "http://") || starts_with_icase(token, "https://") ||
           starts_with_icase(token, "www.");
}

}  // namespace

bool is_letter_cp(char32_t cp) {
    struct Range {
        char32_t lo, hi;
    };
    // Letter blocks of the scripts this pipeline handles (Latin, Greek,
    // Cyrillic). Punctuation, digits, combining marks and math signs that
    // sit inside these blocks are carved out.
    static constexpr std::array<Range, 17> kRanges{{
        {0x0041, 0x005A}, {0x0061, 0x007A},                    // ASCII
        {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x00FF},  // Latin-1
        {0x0100, 0x02AF},                                      // Latin Extended-A/B, IPA
        {0x0370, 0x0373}, {0x0376, 0x0377}, {0x037A, 0x037D},
        {0x037F, 0x037F}, {0x0386, 0x0386}, {0x0388, 0x03A1},  // Greek
        {0x03A3, 0x03F5}, {0x03F7, 0x03FF},
        {0x0400, 0x0481}, {0x048A, 0x04FF},                    // Cyrillic
        {0x0500, 0x052F},                                      // Cyrillic Supplement
    }};
    if (cp == 0x00AA || cp == 0x00B5 || cp == 0x00BA) return true;
    if (cp == 0x038B || cp == 0x038D) return false;  // unassigned Greek slots
    for (const auto& r : kRanges) {
        if (cp >= r.lo && cp <= r.hi) return true;
    }
    return false;
}

char32_t to_lower_cp(char32_t cp) {
    // ASCII and Latin-1.
    if (cp >= 0x41 && cp <= 0x5A) return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A.
    if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
    if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
    if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
    if (cp == 0x178) return 0xFF;
    if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
    // Greek.
    if (cp == 0x386) return 0x3AC;
    if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
    if (cp == 0x38C) return 0x3CC;
    if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
    if (cp >= 0x391 && cp <= 0x3A1) return cp + 0x20;
    if (cp >= 0x3A3 && cp <= 0x3AB) return cp + 0x20;
    // Cyrillic.
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x460 && cp <= 0x481 && cp % 2 == 0) return cp + 1;
    if (cp >= 0x48A && cp <= 0x4BF && cp % 2 == 0) return cp + 1;
    if (cp == 0x4C0) return 0x4CF;
    if (cp >= 0x4C1 && cp <= 0x4CD && cp % 2 == 1) return cp + 1;
    if (cp >= 0x4D0 && cp <= 0x52F && cp % 2 == 0) return cp + 1;
    return cp;
}

std::string clean_text(std::string_view raw) {
    // Replace HTML tags by a space; an unclosed '<' eats the rest of the line.
    std::string untagged;
    untagged.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        if (raw[i] == '<') {
            std::size_t close = raw.find('>', i + 1);
            untagged += ' ';
            if (close != std::string_view::npos) {
                i = close + 1;
            } else {
                std::size_t eol = raw.find('\n', i + 1);
                if (eol == std::string_view::npos) break;
                i = eol;  // the newline itself survives as whitespace
            }
        } else {
            untagged += raw[i];
            ++i;
        }
    }

    // Walk whitespace-delimited tokens, drop hyperlinks, and reduce the rest
    // to lowercase letter runs.
    std::string out;
    out.reserve(untagged.size());
    std::string word;
    auto flush_word = [&] {
        if (!word.empty()) {
            if (!out.empty()) out += ' ';
            out += word;
            word.clear();
        }
    };
    std::size_t i = 0;
    while (i < untagged.size()) {
        while (i < untagged.size() && is_ascii_space(untagged[i])) ++i;
        std::size_t start = i;
        while (i < untagged.size() && !is_ascii_space(untagged[i])) ++i;
        if (i == start) continue;
        std::string_view token(untagged.data() + start, i - start);
        if (is_hyperlink(token)) continue;
        for (std::size_t k = 0; k < token.size();) {
            char32_t cp = decode_utf8(token, k);
            if (is_letter_cp(cp)) {
                encode_utf8(to_lower_cp(cp), word);
            } else {
                flush_word();
            }
        }
        flush_word();
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view cleaned) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && is_ascii_space(cleaned[i])) ++i;
        std::size_t start = i;
        while (i < cleaned.size() && !is_ascii_space(cleaned[i])) ++i;
        if (i > start) tokens.emplace_back(cleaned.substr(start, i - start));
    }
    return tokens;
}

std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaMap& lemmas) {
    for (auto& token : tokens) {
        auto it = lemmas.find(token);
        if (it != lemmas.end()) token = it->second;
    }
    return tokens;
}

LemmaMap load_lemmas(std::istream& in) {
    LemmaMap lemmas;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("lemma row without a tab separator", lineno);
        }
        std::string surface = line.substr(0, tab);
        std::string lemma = line.substr(tab + 1);
        if (lemma.find('\t') != std::string::npos) {
            throw ParseError("lemma row with more than two columns", lineno);
        }
        if (surface.empty() || lemma.empty()) {
            throw ParseError("lemma row with an empty column", lineno);
        }
        lemmas.emplace(std::move(surface), std::move(lemma));  // first entry wins
    }
    return lemmas;
}

}  // namespace embrel
