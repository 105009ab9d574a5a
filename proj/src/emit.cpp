#include "qgc/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qgc/error.hpp"

namespace qgc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(overloaded{[](long long v) { return std::to_string(v); },
                               [](double v) { return format_real(v); },
                               [](const std::string& v) { return csv_field(v); }},
                    c);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

void write_json(const Node& n, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  std::visit(overloaded{
                 [&](std::monostate) { out += "null"; },
                 [&](bool v) { out += v ? "true" : "false"; },
                 [&](long long v) { out += std::to_string(v); },
                 [&](double v) { out += std::isfinite(v) ? format_real(v) : "null"; },
                 [&](const std::string& v) { out += json_string(v); },
                 [&](const Node::Array& a) {
                   if (a.empty()) {
                     out += "[]";
                     return;
                   }
                   out += "[\n";
                   for (std::size_t i = 0; i < a.size(); ++i) {
                     out += pad;
                     write_json(a[i], depth + 1, out);
                     out += i + 1 < a.size() ? ",\n" : "\n";
                   }
                   out += close + "]";
                 },
                 [&](const Node::Object& o) {
                   if (o.empty()) {
                     out += "{}";
                     return;
                   }
                   out += "{\n";
                   for (std::size_t i = 0; i < o.size(); ++i) {
                     out += pad + json_string(o[i].first) + ": ";
                     write_json(o[i].second, depth + 1, out);
                     out += i + 1 < o.size() ? ",\n" : "\n";
                   }
                   out += close + "}";
                 },
             },
             n.value());
}

void flatten(const Node& n, const std::string& prefix, Table& t) {
  std::visit(overloaded{
                 [&](std::monostate) { t.add({prefix, std::string()}); },
                 [&](bool v) { t.add({prefix, std::string(v ? "true" : "false")}); },
                 [&](long long v) { t.add({prefix, v}); },
                 [&](double v) { t.add({prefix, v}); },
                 [&](const std::string& v) { t.add({prefix, v}); },
                 [&](const Node::Array& a) {
                   for (std::size_t i = 0; i < a.size(); ++i)
                     flatten(a[i], prefix + "[" + std::to_string(i) + "]", t);
                 },
                 [&](const Node::Object& o) {
                   for (const auto& [k, v] : o) flatten(v, prefix.empty() ? k : prefix + "." + k, t);
                 },
             },
             n.value());
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "structured" || s == "json") return Format::Structured;
  throw Error(ErrorCode::InvalidArgument, "format must be csv or structured");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw Error(ErrorCode::DimensionMismatch, "row width differs from header");
  rows.push_back(std::move(row));
}

Node& Node::set(const std::string& key, Node value) {
  auto* o = std::get_if<Object>(&v_);
  if (!o) throw Error(ErrorCode::InvalidArgument, "set on a non-object node");
  o->emplace_back(key, std::move(value));
  return o->back().second;
}

Node& Node::push(Node value) {
  auto* a = std::get_if<Array>(&v_);
  if (!a) throw Error(ErrorCode::InvalidArgument, "push on a non-array node");
  a->push_back(std::move(value));
  return a->back();
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_field(t.header[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const Node& n) {
  std::string out;
  write_json(n, 0, out);
  return out + "\n";
}

Node to_node(const Table& t) {
  Node arr = Node::array();
  for (const auto& row : t.rows) {
    Node obj = Node::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj.set(t.header[i], Node(v)); }, row[i]);
    arr.push(std::move(obj));
  }
  return arr;
}

std::string emit(const Table& t, Format f) { return f == Format::Csv ? to_csv(t) : to_json(to_node(t)); }

std::string emit(const Node& n, Format f) {
  if (f == Format::Structured) return to_json(n);
  Table t{{"key", "value"}, {}};
  flatten(n, "", t);
  return to_csv(t);
}

void write_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::IoError, "cannot rename onto " + target.string() + ": " + ec.message());
  }
}

}  // namespace qgc
