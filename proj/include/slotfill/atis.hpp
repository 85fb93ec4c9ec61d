#pragma once

#include <string_view>

#include "slotfill/corpus.hpp"

namespace slotfill {

/// The 127-label ATIS slot inventory, numbered so that the 18-feature
/// manifest below addresses it directly ("O" is label 126).
const LabelInventory& atis_label_inventory();

/// The 18-feature manifest in `features.tsv` form.
std::string_view atis_feature_manifest();

}  // namespace slotfill
