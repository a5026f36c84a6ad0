#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nucrobust/core/image.hpp"

namespace nucrobust {

struct ValidationIssue {
    std::string kind;   // "dimension-mismatch" | "mixed-class-instance" | "unlabelled-class" | "class-out-of-range"
    std::string detail;
    std::int64_t instance = -1; // offending instance label, when applicable
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks layer dimensions, per-instance class purity and labelled pixels
// carrying a background class. All problems become report entries; nothing
// throws.
ValidationReport validate_patch(const LabelledPatch& patch);

// Renumbers instance labels to 1..K in order of first appearance in a
// row-major scan. Background stays 0. Idempotent.
InstanceMap relabel_consecutive(const InstanceMap& m);

struct InventoryEntry {
    std::uint32_t instance;
    int cls;
    std::int64_t pixel_count;
};

// One entry per nonzero label, sorted by label. Throws ValidationError on a
// mixed-class instance.
std::vector<InventoryEntry> instance_inventory(const InstanceMap& m, const ClassMap& c);

} // namespace nucrobust
