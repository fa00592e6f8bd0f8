#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spatial {

// A concept class of the spatiality map. The id is the dot-joined chain of
// ancestor names below the root, e.g. "PROJECTIVE.ORIENTATIONAL.VERTICAL";
// the root itself has id "SPATIAL".
struct CategoryNode {
  std::string id;
  std::string label;
  std::optional<std::string> parent;
};

class SpatialityMap {
 public:
  static constexpr std::string_view kRoot = "SPATIAL";

  // Builds a map from nodes listed parent-first. Throws ValidationError when
  // the nodes do not form a tree rooted at SPATIAL with consistent ids.
  explicit SpatialityMap(std::vector<CategoryNode> nodes);

  const CategoryNode* resolve(std::string_view path) const;
  bool contains(std::string_view path) const { return resolve(path) != nullptr; }

  // Reflexive ancestor test. Throws ValidationError on an unknown path.
  bool subsumes(std::string_view ancestor, std::string_view descendant) const;

  // The TOPOLOGICAL/PROJECTIVE/DIRECTIONAL ancestor of a path (empty for the
  // root). Throws ValidationError on an unknown path.
  std::string top_level(std::string_view path) const;

  // Parent chain from the node up to and including the root.
  std::vector<const CategoryNode*> ancestors(std::string_view path) const;

  const std::vector<CategoryNode>& nodes() const { return nodes_; }

 private:
  const CategoryNode& require(std::string_view path) const;

  std::vector<CategoryNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
};

const SpatialityMap& default_map();

// Top-level component of a category path without consulting a map.
std::string_view top_level_of(std::string_view path);

}  // namespace spatial
