#include "revoc/accumulators/capabilities.hpp"

namespace revoc {

std::string_view to_string(UpdateProperty p) {
    switch (p) {
        case UpdateProperty::Static: return "static";
        case UpdateProperty::Additive: return "additive";
        case UpdateProperty::Subtractive: return "subtractive";
        case UpdateProperty::Dynamic: return "dynamic";
    }
    return "?";
}

std::string_view to_string(ProofProperty p) {
    switch (p) {
        case ProofProperty::Positive: return "positive";
        case ProofProperty::Negative: return "negative";
        case ProofProperty::Universal: return "universal";
    }
    return "?";
}

}  // namespace revoc
