#ifndef STRAT_IO_HPP
#define STRAT_IO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strat/gaussmanin.hpp"

namespace strat {

// A bundle file holds either a tower or a bare connection (the latter is the
// input format for descents, whose whole point is that the connection may
// fail to extend).  Polynomials are canonicalized on load, so serializing a
// freshly parsed file is a fixed point.
struct Bundle {
  enum class Kind { Tower, Connection };
  Kind kind = Kind::Tower;
  Tower tower;
  Connection connection;
  std::optional<std::vector<std::string>> split_base;  // optional "split" key

  RelativeSplit split() const;  // derived from the tower plus the override
};

Bundle parse_bundle_text(const std::string& json_text);
Bundle parse_bundle_file(const std::string& path);

std::string serialize_tower(const Tower& t,
                            const std::vector<std::vector<Poly>>* embedding = nullptr,
                            const std::optional<std::vector<std::string>>& split_base = std::nullopt);
std::string serialize_connection(const Connection& c);

std::string read_file(const std::string& path);
uint64_t fnv1a64(const std::string& data);
std::string digest_hex(const std::string& data);

// Machine- and human-readable views of one command run; both renderings
// carry exactly the same content.
struct Report {
  std::string command;
  std::string input_path;
  std::string input_digest;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> findings;
  std::string status = "ok";  // ok | error:<kind> | inconclusive

  std::string render_text() const;
  std::string render_json() const;
};

}  // namespace strat

#endif  // STRAT_IO_HPP
