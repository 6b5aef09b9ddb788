#pragma once

#include <cstdint>
#include <string_view>

namespace revoc {

enum class UpdateProperty : std::uint8_t { Static, Additive, Subtractive, Dynamic };
enum class ProofProperty : std::uint8_t { Positive, Negative, Universal };

std::string_view to_string(UpdateProperty p);
std::string_view to_string(ProofProperty p);

struct MethodCapabilities {
    UpdateProperty update = UpdateProperty::Static;
    ProofProperty proof = ProofProperty::Positive;

    bool can_add() const { return update == UpdateProperty::Additive || update == UpdateProperty::Dynamic; }
    bool can_remove() const { return update == UpdateProperty::Subtractive || update == UpdateProperty::Dynamic; }
    /// Excluding an element and including it again later.
    bool can_round_trip() const { return update == UpdateProperty::Dynamic; }

    bool operator==(const MethodCapabilities&) const = default;
};

}  // namespace revoc
