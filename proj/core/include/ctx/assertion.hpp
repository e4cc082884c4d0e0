#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ctx {

/// Identifiers used for concepts, roles and individuals: one or more of
/// [A-Za-z0-9_.:-]. Whitespace-free by construction, so serialized lines
/// tokenize unambiguously.
bool is_valid_identifier(std::string_view s);

/// Membership of an individual in a named concept ("inst C a").
struct ConceptAssertion {
    std::string concept_name;
    std::string individual;

    auto operator<=>(const ConceptAssertion&) const = default;
};

/// A binary relation between two individuals ("rel r a b").
struct RoleAssertion {
    std::string role;
    std::string subject;
    std::string object;

    auto operator<=>(const RoleAssertion&) const = default;
};

/// One ABox fact. Concept assertions order before role assertions, matching
/// the lexicographic order of their serialized forms ("inst" < "rel").
using Assertion = std::variant<ConceptAssertion, RoleAssertion>;

using AssertionSet = std::set<Assertion>;

/// Serialized line form, e.g. "rel uses BodyWelding Robo-1".
std::string to_line(const Assertion& a);

/// Concept and role vocabulary plus atomic subsumptions (TBox).
struct Vocabulary {
    std::set<std::string> concepts;
    std::set<std::string> roles;
    std::set<std::pair<std::string, std::string>> subsumptions;  // (child, parent)

    bool operator==(const Vocabulary&) const = default;
    bool empty() const { return concepts.empty() && roles.empty() && subsumptions.empty(); }

    /// Serialized vocabulary lines in canonical order: all "concept X" lines,
    /// then "role Y", then "isa Child Parent", each group sorted.
    std::vector<std::string> lines() const;
};

}  // namespace ctx
