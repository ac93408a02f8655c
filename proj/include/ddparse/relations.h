#ifndef DDPARSE_RELATIONS_H_
#define DDPARSE_RELATIONS_H_

#include <string>
#include <string_view>
#include <vector>

namespace ddparse {

enum class Granularity { kCoarse, kFine };

// Relation carried by the arc from the artificial root to the topic EDU.
inline constexpr std::string_view kRootRelation = "ROOT";
// Most frequent fine relation; used by the random baseline.
inline constexpr std::string_view kDefaultRelation = "elab-addition";

// Closed label inventory in canonical order (26 fine, 17 coarse). The root
// relation is last in both.
const std::vector<std::string>& RelationInventory(Granularity g);

// Maps a fine label to its coarse class. Coarse labels map to themselves.
// Unknown labels are returned unchanged.
std::string ToCoarse(std::string_view label);
std::string ToGranularity(std::string_view label, Granularity g);

bool IsKnownRelation(std::string_view label);

// Position of `label` in the inventory, or the inventory size if absent.
std::size_t InventoryIndex(std::string_view label, Granularity g);

std::string_view GranularityName(Granularity g);
// Throws std::invalid_argument on anything but "coarse"/"fine".
Granularity ParseGranularity(std::string_view name);

}  // namespace ddparse

#endif  // DDPARSE_RELATIONS_H_
