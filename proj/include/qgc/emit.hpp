#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qgc {

enum class Format { Csv, Structured };

Format format_from_string(const std::string& s);

// %.17g, which round-trips every double; non-finite values print as
// nan, inf, -inf.
std::string format_real(double v);

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

// Ordered document tree. Object members keep insertion order so output is
// byte-stable.
class Node {
 public:
  using Object = std::vector<std::pair<std::string, Node>>;
  using Array = std::vector<Node>;

  Node() = default;
  Node(bool v) : v_(v) {}
  Node(int v) : v_(static_cast<long long>(v)) {}
  Node(long long v) : v_(v) {}
  Node(double v) : v_(v) {}
  Node(const char* v) : v_(std::string(v)) {}
  Node(std::string v) : v_(std::move(v)) {}

  static Node object() { Node n; n.v_ = Object{}; return n; }
  static Node array() { Node n; n.v_ = Array{}; return n; }

  Node& set(const std::string& key, Node value);  // appends; objects only
  Node& push(Node value);                         // arrays only

  const auto& value() const { return v_; }

 private:
  std::variant<std::monostate, bool, long long, double, std::string, Array, Object> v_;
};

std::string to_csv(const Table& t);
std::string to_json(const Node& n);
Node to_node(const Table& t);  // array of row objects

// Reports in CSV form are flattened to dotted key,value lines.
std::string emit(const Table& t, Format f);
std::string emit(const Node& n, Format f);

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& bytes);

}  // namespace qgc
