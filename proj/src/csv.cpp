#include "embrel/csv.hpp"

#include "embrel/errors.hpp"

namespace embrel {

std::optional<std::vector<std::string>> CsvReader::next_record() {
    int first = in_.peek();
    if (first == std::char_traits<char>::eof()) return std::nullopt;

    record_line_ = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool done = false;

    while (!done) {
        int ci = in_.get();
        if (ci == std::char_traits<char>::eof()) {
            if (quoted) {
                throw ParseError("unterminated quoted field", record_line_);
            }
            done = true;
            break;
        }
        char c = static_cast<char>(ci);
        if (c == '\n') ++line_;

        if (quoted) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty()) {
                    quoted = true;
                } else {
                    field += c;  // literal quote inside an unquoted field
                }
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                if (in_.peek() == '\n') break;  // swallow the CR of a CRLF
                field += c;
                break;
            case '\n':
                done = true;
                break;
            default:
                field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        const std::string& f = fields[i];
        bool needs_quotes = f.find_first_of(",\"\r\n") != std::string::npos;
        if (needs_quotes) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << "\"\"";
                else out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

}  // namespace embrel
