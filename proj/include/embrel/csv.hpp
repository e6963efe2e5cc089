#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace embrel {

// Incremental RFC 4180 reader: quoted fields may contain commas, doubled
// quotes and embedded line breaks. Accepts both LF and CRLF records. Quotes
// inside unquoted fields are kept literally.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. Throws ParseError on an
    // unterminated quoted field.
    std::optional<std::vector<std::string>> next_record();

    // 1-based physical line where the most recent record started.
    std::size_t record_line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

// Writes one record, quoting fields that contain commas, quotes or line
// breaks; terminates with '\n'.
void write_csv_record(std::ostream& out, std::span<const std::string> fields);

}  // namespace embrel
