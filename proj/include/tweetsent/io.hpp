#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tweetsent/error.hpp"

namespace tweetsent::io {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return std::move(ss).str();
}

/// Writes `content` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("error writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

/// Calls `fn(line_number, line)` for every line that is neither blank nor a
/// `#` comment. Trailing '\r' is stripped.
inline void for_each_entry(std::string_view text,
                           const std::function<void(std::size_t, std::string_view)>& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') fn(line_no, line);
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
}

// ---------------------------------------------------------------------------
// CSV: comma separated, '"' quoting with "" escapes, first row is the header.

struct CsvRow {
  std::size_t line = 0;  // line on which the record starts
  std::vector<std::string> fields;
};

/// Outcome of splitting one record; `error` is set for unterminated quotes or
/// stray characters after a closing quote.
struct CsvRecord {
  CsvRow row;
  std::optional<std::string> error;
};

/// Incremental RFC 4180 style record reader. Quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  bool done() const noexcept { return pos_ >= text_.size(); }

  CsvRecord next() {
    CsvRecord rec;
    rec.row.line = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (quoted) {
        ++pos_;
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        rec.row.fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
        ++pos_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        ++pos_;
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        ++line_;
        rec.row.fields.push_back(std::move(field));
        return rec;
      }
      ++pos_;
      if (c == '"' && field.empty() && !after_quote) {
        quoted = true;
        continue;
      }
      if (after_quote && !rec.error) rec.error = "unexpected character after closing quote";
      field.push_back(c);
    }
    if (quoted) rec.error = "unterminated quoted field";
    rec.row.fields.push_back(std::move(field));
    return rec;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!field.empty() && (field.front() == ' ' || field.back() == ' '));
}

inline void append_csv_field(std::string& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline void append_csv_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    append_csv_field(out, fields[i]);
  }
  out.push_back('\n');
}

/// Parses a whole CSV table; any malformed record is a ParseError.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

inline CsvTable parse_csv_table(std::string_view text, const std::string& source) {
  CsvReader reader(text);
  CsvTable table;
  if (reader.done()) throw ParseError(source, 1, "missing header row");
  auto head = reader.next();
  if (head.error) throw ParseError(source, head.row.line, *head.error);
  table.header = std::move(head.row.fields);
  while (!reader.done()) {
    auto rec = reader.next();
    if (rec.error) throw ParseError(source, rec.row.line, *rec.error);
    if (rec.row.fields.size() == 1 && rec.row.fields[0].empty()) continue;
    if (rec.row.fields.size() != table.header.size()) {
      throw ParseError(source, rec.row.line, "expected " + std::to_string(table.header.size()) +
                                                 " fields, found " +
                                                 std::to_string(rec.row.fields.size()));
    }
    table.rows.push_back(std::move(rec.row));
  }
  return table;
}

}  // namespace tweetsent::io
