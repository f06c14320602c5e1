#pragma once

// RFC 4180 CSV: comma separator, double-quote quoting, embedded newlines
// allowed inside quotes. Reader accepts LF and CRLF; writer emits LF.

#include <string>
#include <string_view>
#include <vector>

#include "dzhate/error.hpp"

namespace dzhate::csv {

using Record = std::vector<std::string>;

// Which fields were written in quotes; lets `""` and an empty field differ.
using QuoteMask = std::vector<bool>;

inline std::vector<Record> parse(std::string_view text, std::vector<QuoteMask>* quoted = nullptr) {
  std::vector<Record> records;
  QuoteMask mask;
  bool field_quoted = false;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  Record record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_field = [&] {
    record.push_back(std::move(field));
    mask.push_back(field_quoted);
    field.clear();
    field_started = false;
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    if (quoted) quoted->push_back(std::move(mask));
    mask.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      field_quoted = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      i += 2;
    } else if (c == '\n') {
      end_record();
      ++i;
    } else {
      field.push_back(c);
      field_started = true;
      ++i;
    }
  }
  if (in_quotes) {
    throw Error("unterminated quoted field at row " + std::to_string(records.size() + 1));
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

inline bool needs_quoting(std::string_view field) {
  if (field.empty()) return false;
  if (field.front() == ' ' || field.back() == ' ') return true;
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void write_field(std::string& out, std::string_view field, bool force_quotes = false) {
  if (!force_quotes && !needs_quoting(field)) {
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

inline void write_record(std::string& out, const Record& record, const QuoteMask& force = {}) {
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i) out.push_back(',');
    write_field(out, record[i], i < force.size() && force[i]);
  }
  out.push_back('\n');
}

// Header-indexed view over parsed records.
class Table {
 public:
  explicit Table(std::vector<Record> records, std::vector<QuoteMask> quoted = {})
      : records_(std::move(records)), quoted_(std::move(quoted)) {
    if (records_.empty()) throw Error("missing header row");
    header_ = std::move(records_.front());
    records_.erase(records_.begin());
    if (!quoted_.empty()) quoted_.erase(quoted_.begin());
  }

  static Table from_text(std::string_view text) {
    std::vector<QuoteMask> quoted;
    auto records = parse(text, &quoted);
    return Table(std::move(records), std::move(quoted));
  }

  bool quoted(std::size_t row, std::size_t col) const {
    return row < quoted_.size() && col < quoted_[row].size() && quoted_[row][col];
  }

  const Record& header() const { return header_; }
  const std::vector<Record>& rows() const { return records_; }

  // -1 if absent.
  int column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  int require(std::string_view name) const {
    const int c = column(name);
    if (c < 0) throw Error("missing column \"" + std::string(name) + "\"");
    return c;
  }

  // 1-based, the header being row 1.
  static std::size_t row_number(std::size_t data_index) { return data_index + 2; }

 private:
  Record header_;
  std::vector<Record> records_;
  std::vector<QuoteMask> quoted_;
};

}  // namespace dzhate::csv
