#include "ctx/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ctx/errors.hpp"

namespace ctx {

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::BadIdentifier: return "bad-identifier";
        case ViolationKind::UndeclaredConcept: return "undeclared-concept";
        case ViolationKind::UndeclaredRole: return "undeclared-role";
        case ViolationKind::SubsumptionUndeclaredConcept: return "isa-undeclared-concept";
        case ViolationKind::CyclicSubsumption: return "cyclic-subsumption";
    }
    return "unknown";
}

std::string Violation::message() const {
    return std::string(to_string(kind)) + ": " + detail;
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& v : violations) {
        out += v.message();
        out += '\n';
    }
    return out;
}

namespace {

void check_identifier(const std::string& value, const char* what,
                      std::vector<Violation>& out) {
    if (!is_valid_identifier(value)) {
        out.push_back({ViolationKind::BadIdentifier,
                       std::string(what) + " '" + value + "'"});
    }
}

// Detects a directed cycle in the subsumption graph; reports one involved node.
void check_acyclic(const Vocabulary& vocab, std::vector<Violation>& out) {
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& [child, parent] : vocab.subsumptions) edges[child].push_back(parent);

    enum class Color { White, Grey, Black };
    std::map<std::string, Color> color;
    for (const auto& [node, _] : edges) color[node] = Color::White;

    // Iterative DFS; grey re-entry means a cycle.
    for (const auto& [start, _] : edges) {
        if (color[start] != Color::White) continue;
        std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
        color[start] = Color::Grey;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto it = edges.find(node);
            if (it == edges.end() || next >= it->second.size()) {
                color[node] = Color::Black;
                stack.pop_back();
                continue;
            }
            const std::string& target = it->second[next++];
            auto cit = color.find(target);
            if (cit == color.end()) {
                color[target] = Color::Black;  // leaf: no outgoing edges
                continue;
            }
            if (cit->second == Color::Grey) {
                out.push_back({ViolationKind::CyclicSubsumption,
                               "subsumption cycle through '" + target + "'"});
                return;
            }
            if (cit->second == Color::White) {
                cit->second = Color::Grey;
                stack.push_back({target, 0});
            }
        }
    }
}

}  // namespace

ValidationReport validate(const Snapshot& snapshot) {
    ValidationReport report;
    auto& out = report.violations;
    const Vocabulary& vocab = snapshot.vocabulary();

    for (const auto& c : vocab.concepts) check_identifier(c, "concept", out);
    for (const auto& r : vocab.roles) check_identifier(r, "role", out);
    for (const auto& [child, parent] : vocab.subsumptions) {
        check_identifier(child, "isa child", out);
        check_identifier(parent, "isa parent", out);
        if (!vocab.concepts.contains(child)) {
            out.push_back({ViolationKind::SubsumptionUndeclaredConcept,
                           "isa child '" + child + "' not declared as a concept"});
        }
        if (!vocab.concepts.contains(parent)) {
            out.push_back({ViolationKind::SubsumptionUndeclaredConcept,
                           "isa parent '" + parent + "' not declared as a concept"});
        }
    }
    check_acyclic(vocab, out);

    for (const auto& a : snapshot.abox()) {
        if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
            check_identifier(ca->concept_name, "assertion concept", out);
            check_identifier(ca->individual, "individual", out);
            if (!vocab.concepts.contains(ca->concept_name)) {
                out.push_back({ViolationKind::UndeclaredConcept,
                               "inst over undeclared concept '" + ca->concept_name + "'"});
            }
        } else {
            const auto& ra = std::get<RoleAssertion>(a);
            check_identifier(ra.role, "assertion role", out);
            check_identifier(ra.subject, "subject", out);
            check_identifier(ra.object, "object", out);
            if (!vocab.roles.contains(ra.role)) {
                out.push_back({ViolationKind::UndeclaredRole,
                               "rel over undeclared role '" + ra.role + "'"});
            }
        }
    }
    return report;
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

std::string need_identifier(const std::string& token, std::size_t line_no) {
    if (!is_valid_identifier(token)) {
        throw ParseError(line_no, token, "invalid identifier");
    }
    return token;
}

}  // namespace

Snapshot parse_snapshot_unvalidated(std::string_view text) {
    std::string id;
    std::uint64_t timestamp = 0;
    bool header_seen = false;
    Vocabulary vocab;
    AssertionSet abox;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& directive = tokens[0];

        if (!header_seen) {
            if (directive != "@snapshot") {
                throw ParseError(line_no, directive, "expected '@snapshot <id> <timestamp>' first");
            }
            if (tokens.size() != 3) {
                throw ParseError(line_no, directive, "@snapshot takes exactly <id> <timestamp>");
            }
            id = need_identifier(tokens[1], line_no);
            const auto& ts = tokens[2];
            auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), timestamp);
            if (ec != std::errc{} || ptr != ts.data() + ts.size()) {
                throw ParseError(line_no, ts, "timestamp must be a non-negative integer");
            }
            header_seen = true;
            continue;
        }

        if (directive == "@snapshot") {
            throw ParseError(line_no, directive, "duplicate @snapshot header");
        } else if (directive == "concept") {
            if (tokens.size() != 2) throw ParseError(line_no, directive, "concept takes <Name>");
            vocab.concepts.insert(need_identifier(tokens[1], line_no));
        } else if (directive == "role") {
            if (tokens.size() != 2) throw ParseError(line_no, directive, "role takes <Name>");
            vocab.roles.insert(need_identifier(tokens[1], line_no));
        } else if (directive == "isa") {
            if (tokens.size() != 3) throw ParseError(line_no, directive, "isa takes <Child> <Parent>");
            vocab.subsumptions.emplace(need_identifier(tokens[1], line_no),
                                       need_identifier(tokens[2], line_no));
        } else if (directive == "inst") {
            if (tokens.size() != 3)
                throw ParseError(line_no, directive, "inst takes <Concept> <Individual>");
            abox.insert(ConceptAssertion{need_identifier(tokens[1], line_no),
                                         need_identifier(tokens[2], line_no)});
        } else if (directive == "rel") {
            if (tokens.size() != 4)
                throw ParseError(line_no, directive, "rel takes <Role> <Subject> <Object>");
            abox.insert(RoleAssertion{need_identifier(tokens[1], line_no),
                                      need_identifier(tokens[2], line_no),
                                      need_identifier(tokens[3], line_no)});
        } else {
            throw ParseError(line_no, directive, "unknown directive");
        }
    }
    if (!header_seen) {
        throw ParseError(line_no, "", "missing '@snapshot <id> <timestamp>' header");
    }
    return Snapshot(std::move(id), timestamp, std::move(vocab), std::move(abox));
}

Snapshot parse_snapshot(std::string_view text) {
    Snapshot snapshot = parse_snapshot_unvalidated(text);
    if (const auto report = validate(snapshot); !report.ok()) {
        throw ValidationError("invalid snapshot:\n" + report.to_text());
    }
    return snapshot;
}

std::string canonical_content(const Snapshot& snapshot) {
    std::string out;
    for (const auto& line : snapshot.vocabulary().lines()) {
        out += line;
        out += '\n';
    }
    // std::set iteration order equals the lexicographic order of the
    // serialized lines: fields compare hierarchically and the separator
    // (space) is below every identifier character.
    for (const auto& a : snapshot.abox()) {
        out += to_line(a);
        out += '\n';
    }
    return out;
}

std::string serialize(const Snapshot& snapshot) {
    std::string out = "@snapshot " + snapshot.id() + " " + std::to_string(snapshot.timestamp());
    out += '\n';
    out += canonical_content(snapshot);
    return out;
}

Snapshot load_snapshot_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_snapshot(buffer.str());
}

void write_snapshot_file(const Snapshot& snapshot, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write snapshot file: " + path.string());
    out << serialize(snapshot);
}

}  // namespace ctx
