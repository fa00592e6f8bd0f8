#include "spatial/semantic_map.hpp"

#include "spatial/error.hpp"

namespace spatial {

SpatialityMap::SpatialityMap(std::vector<CategoryNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (!index_.emplace(node.id, i).second) throw ValidationError("duplicate category id: " + node.id);
    if (node.id == kRoot) {
      if (node.parent) throw ValidationError("root category must not have a parent");
      continue;
    }
    if (!node.parent) throw ValidationError("category " + node.id + " has no parent");
    const auto parent = index_.find(*node.parent);
    if (parent == index_.end()) {
      throw ValidationError("category " + node.id + " lists parent " + *node.parent + " before it is defined");
    }
    // Children of the root are bare names; deeper ids extend the parent id.
    const std::string prefix = (*node.parent == kRoot) ? std::string() : *node.parent + ".";
    const auto last = node.id.substr(prefix.size());
    if (node.id.compare(0, prefix.size(), prefix) != 0 || last.empty() || last.find('.') != std::string::npos) {
      throw ValidationError("category id " + node.id + " does not extend its parent " + *node.parent);
    }
  }
  if (!index_.count(std::string(kRoot))) throw ValidationError("map has no SPATIAL root");
}

const CategoryNode* SpatialityMap::resolve(std::string_view path) const {
  const auto it = index_.find(std::string(path));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const CategoryNode& SpatialityMap::require(std::string_view path) const {
  const auto* node = resolve(path);
  if (node == nullptr) throw ValidationError("unknown category path: " + std::string(path));
  return *node;
}

std::vector<const CategoryNode*> SpatialityMap::ancestors(std::string_view path) const {
  std::vector<const CategoryNode*> chain;
  const CategoryNode* node = &require(path);
  while (true) {
    chain.push_back(node);
    if (!node->parent) break;
    node = &require(*node->parent);
  }
  return chain;
}

bool SpatialityMap::subsumes(std::string_view ancestor, std::string_view descendant) const {
  const auto& anc = require(ancestor);
  for (const auto* node : ancestors(descendant)) {
    if (node == &anc) return true;
  }
  return false;
}

std::string SpatialityMap::top_level(std::string_view path) const {
  const auto chain = ancestors(path);
  // chain ends with the root; the node before it is the top-level category.
  return chain.size() < 2 ? std::string() : chain[chain.size() - 2]->id;
}

const SpatialityMap& default_map() {
  static const SpatialityMap map([] {
    std::vector<CategoryNode> n;
    const auto add = [&n](std::string id, std::string label, std::optional<std::string> parent) {
      n.push_back(CategoryNode{std::move(id), std::move(label), std::move(parent)});
    };
    add("SPATIAL", "Spatiality", std::nullopt);

    add("TOPOLOGICAL", "Topological relation (internal localization)", "SPATIAL");
    add("TOPOLOGICAL.INCLUSION", "Inclusion", "TOPOLOGICAL");
    add("TOPOLOGICAL.INCLUSION.CONTAINMENT", "Containment", "TOPOLOGICAL.INCLUSION");
    add("TOPOLOGICAL.INCLUSION.DISTRIBUTION", "Distribution", "TOPOLOGICAL.INCLUSION");
    add("TOPOLOGICAL.SUPPORT", "Support", "TOPOLOGICAL");
    add("TOPOLOGICAL.PERIPHERY", "Periphery", "TOPOLOGICAL");

    add("PROJECTIVE", "Projective relation (external localization)", "SPATIAL");
    add("PROJECTIVE.DISTANCE", "Distance", "PROJECTIVE");
    add("PROJECTIVE.DISTANCE.PROXIMITY", "Proximity", "PROJECTIVE.DISTANCE");
    add("PROJECTIVE.DISTANCE.REMOTENESS", "Remoteness", "PROJECTIVE.DISTANCE");
    add("PROJECTIVE.ORIENTATIONAL", "Orientational", "PROJECTIVE");
    add("PROJECTIVE.ORIENTATIONAL.VERTICAL", "Vertical axis", "PROJECTIVE.ORIENTATIONAL");
    add("PROJECTIVE.ORIENTATIONAL.LATERAL", "Lateral axis", "PROJECTIVE.ORIENTATIONAL");
    add("PROJECTIVE.ORIENTATIONAL.FRONTAL", "Frontal axis", "PROJECTIVE.ORIENTATIONAL");

    add("DIRECTIONAL", "Directional relation", "SPATIAL");
    add("DIRECTIONAL.GOAL", "Goal", "DIRECTIONAL");
    add("DIRECTIONAL.SOURCE", "Source", "DIRECTIONAL");
    add("DIRECTIONAL.PATH", "Path / medium", "DIRECTIONAL");
    add("DIRECTIONAL.CARDINAL", "Cardinal direction", "DIRECTIONAL");
    add("DIRECTIONAL.GAZE", "Gaze direction", "DIRECTIONAL");
    return n;
  }());
  return map;
}

std::string_view top_level_of(std::string_view path) { return path.substr(0, path.find('.')); }

}  // namespace spatial
