#include "rvmon/traceio.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace rvmon {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void fail(const std::string& msg) { throw TraceFormatError(msg); }

/* Input-variable layout: maps column names to row positions and validates
 * one parsed value per (instant, variable). */
struct Layout {
  std::vector<VarIdx> inputs;            // declared input variables
  std::map<std::string, VarIdx> by_name;
  int row_width = 0;                     // rows are indexed by VarIdx

  explicit Layout(const VarTable& vars) : inputs(vars.source_vars()) {
    for (VarIdx v : inputs) {
      by_name.emplace(vars.name(v), v);
      row_width = std::max(row_width, v + 1);
    }
  }
};

void check_sort(const VarTable& vars, VarIdx v, const Rat& val,
                const std::string& where) {
  if (vars.sort(v) == Sort::Int && !is_integral(val))
    fail(where + ": integer variable '" + vars.name(v) +
         "' given non-integer value " + show_exact(val));
}

Trace load_csv(std::istream& in, const VarTable& vars) {
  Layout layout(vars);
  std::string line;
  int lineno = 0;

  // header
  std::vector<VarIdx> columns;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> names = split_csv_line(line);
    std::map<std::string, int> seen;
    for (const std::string& name : names) {
      auto it = layout.by_name.find(name);
      if (it == layout.by_name.end())
        fail("line " + std::to_string(lineno) + ": unknown column '" + name +
             "'");
      if (++seen[name] > 1)
        fail("line " + std::to_string(lineno) + ": duplicate column '" + name +
             "'");
      columns.push_back(it->second);
    }
    if (static_cast<int>(columns.size()) < static_cast<int>(layout.inputs.size()))
      for (VarIdx v : layout.inputs)
        if (!seen.count(vars.name(v)))
          fail("line " + std::to_string(lineno) + ": missing column '" +
               vars.name(v) + "'");
    break;
  }
  if (columns.empty()) fail("empty trace file: no header line");

  Trace tr;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != columns.size())
      fail("line " + std::to_string(lineno) + ": expected " +
           std::to_string(columns.size()) + " values, got " +
           std::to_string(cells.size()));
    std::vector<Rat> row(layout.row_width);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      VarIdx v = columns[i];
      std::string where =
          "line " + std::to_string(lineno) + ", column '" + vars.name(v) + "'";
      Rat val;
      try {
        val = parse_exact(cells[i]);
      } catch (const ValueError& e) {
        fail(where + ": " + e.what());
      }
      check_sort(vars, v, val, where);
      row[v] = val;
    }
    tr.rows.push_back(std::move(row));
  }
  if (tr.rows.empty()) fail("empty trace: no data rows");
  return tr;
}

Trace load_json(std::istream& in, const VarTable& vars) {
  Layout layout(vars);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string("trace JSON: ") + e.what());
  }
  if (!doc.is_array()) fail("trace JSON: expected an array of objects");
  if (doc.empty()) fail("empty trace: no instants");

  Trace tr;
  int index = 0;
  for (const json& obj : doc) {
    std::string where = "instant " + std::to_string(index);
    if (!obj.is_object()) fail(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!layout.by_name.count(it.key()))
        fail(where + ": unknown variable '" + it.key() + "'");
    std::vector<Rat> row(layout.row_width);
    for (VarIdx v : layout.inputs) {
      const std::string& name = vars.name(v);
      auto it = obj.find(name);
      if (it == obj.end()) fail(where + ": missing variable '" + name + "'");
      const json& val = *it;
      std::string at = where + ", variable '" + name + "'";
      Rat r;
      if (val.is_number_integer()) {
        r = Rat(static_cast<long>(val.get<std::int64_t>()));
      } else if (val.is_number()) {
        fail(at +
             ": non-integer numbers are not exact; write the value as a "
             "string, either \"p/q\" or a finite decimal like \"1.25\"");
      } else if (val.is_string()) {
        try {
          r = parse_exact(val.get<std::string>());
        } catch (const ValueError& e) {
          fail(at + ": " + e.what());
        }
      } else {
        fail(at + ": expected a number or a numeric string");
      }
      check_sort(vars, v, r, at);
      row[v] = r;
    }
    tr.rows.push_back(std::move(row));
    ++index;
  }
  return tr;
}

}  // namespace

Trace load_trace(std::istream& in, const VarTable& vars) {
  // sniff: JSON documents open with '[' (or '{', reported as a shape error)
  int c;
  while ((c = in.peek()) != EOF && (c == ' ' || c == '\t' || c == '\n' ||
                                    c == '\r'))
    in.get();
  if (c == '[' || c == '{') return load_json(in, vars);
  return load_csv(in, vars);
}

Trace load_trace_file(const std::string& path, const VarTable& vars) {
  std::ifstream in(path);
  if (!in) fail("cannot open trace file: " + path);
  try {
    return load_trace(in, vars);
  } catch (const TraceFormatError& e) {
    throw TraceFormatError(path + ": " + e.what());
  }
}

}  // namespace rvmon
