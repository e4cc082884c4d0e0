#include "ctx/assertion.hpp"

namespace ctx {

bool is_valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.' || c == ':' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string to_line(const Assertion& a) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
        return "inst " + ca->concept_name + " " + ca->individual;
    }
    const auto& ra = std::get<RoleAssertion>(a);
    return "rel " + ra.role + " " + ra.subject + " " + ra.object;
}

std::vector<std::string> Vocabulary::lines() const {
    std::vector<std::string> out;
    out.reserve(concepts.size() + roles.size() + subsumptions.size());
    for (const auto& c : concepts) out.push_back("concept " + c);
    for (const auto& r : roles) out.push_back("role " + r);
    for (const auto& [child, parent] : subsumptions) out.push_back("isa " + child + " " + parent);
    return out;
}

}  // namespace ctx
