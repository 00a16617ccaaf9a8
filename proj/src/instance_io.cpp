#include "selfcontrol/instance_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace selfcontrol {

namespace {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw InputError(std::string(source_) + ": " + path + ": " + what);
    }

    const json& object(const json& node, const std::string& path) const {
        if (!node.is_object()) fail(path, "expected an object");
        return node;
    }

    void only_keys(const json& node, const std::string& path, std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, value] : node.items()) {
            bool known = false;
            for (auto k : keys) known = known || key == k;
            if (!known) fail(path, "unknown key '" + key + "'");
        }
    }

    const json& member(const json& node, const std::string& path, const std::string& key) const {
        auto it = node.find(key);
        if (it == node.end()) fail(path, "missing key '" + key + "'");
        return *it;
    }

    double number(const json& node, const std::string& path, const std::string& key) const {
        const json& v = member(node, path, key);
        if (!v.is_number()) fail(path + "." + key, "expected a number");
        return v.get<double>();
    }

    std::string_view source_;
};

CostFunction read_cost(const Reader& r, const json& node) {
    r.object(node, "cost");
    const json& type = r.member(node, "cost", "type");
    if (!type.is_string()) r.fail("cost.type", "expected a string");
    const auto tag = type.get<std::string>();
    if (tag == "piecewise_linear") {
        r.only_keys(node, "cost", {"type", "l", "k", "w"});
        return PiecewiseLinear{r.number(node, "cost", "l"), r.number(node, "cost", "k"), r.number(node, "cost", "w")};
    }
    if (tag == "power") {
        r.only_keys(node, "cost", {"type", "alpha", "gamma"});
        return Power{r.number(node, "cost", "alpha"), r.number(node, "cost", "gamma")};
    }
    r.fail("cost.type", "unknown cost type '" + tag + "' (expected piecewise_linear or power)");
}

GridSpec read_grid(const Reader& r, const json& node) {
    r.object(node, "grid");
    r.only_keys(node, "grid", {"price_step", "price_min", "price_max", "max_menu_size", "include_analytic_prices"});
    GridSpec g;
    if (node.contains("price_step")) g.price_step = r.number(node, "grid", "price_step");
    if (node.contains("price_min")) g.price_min = r.number(node, "grid", "price_min");
    if (node.contains("price_max")) g.price_max = r.number(node, "grid", "price_max");
    if (node.contains("max_menu_size")) {
        const json& v = node["max_menu_size"];
        if (!v.is_number_integer()) r.fail("grid.max_menu_size", "expected an integer");
        g.max_menu_size = v.get<int>();
    }
    if (node.contains("include_analytic_prices")) {
        const json& v = node["include_analytic_prices"];
        if (!v.is_boolean()) r.fail("grid.include_analytic_prices", "expected a boolean");
        g.include_analytic_prices = v.get<bool>();
    }
    try {
        validate_grid(g, 1);
    } catch (const std::invalid_argument& e) {
        r.fail("grid", e.what());
    }
    return g;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

InstanceFile parse_instance(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, col] = line_column(text, byte);
        std::ostringstream msg;
        msg << source << ':' << line << ':' << col << ": malformed JSON (" << e.what() << ')';
        throw InputError(msg.str());
    }

    const Reader r(source);
    r.object(doc, "$");
    r.only_keys(doc, "$", {"alternatives", "cost", "solver", "grid"});

    const json& list = r.member(doc, "$", "alternatives");
    if (!list.is_array()) r.fail("alternatives", "expected an array");
    std::vector<Alternative> alts;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "alternatives[" + std::to_string(i) + "]";
        const json& item = r.object(list[i], path);
        r.only_keys(item, path, {"id", "u", "v", "c"});
        const json& id = r.member(item, path, "id");
        if (!id.is_string()) r.fail(path + ".id", "expected a string");
        alts.push_back({id.get<std::string>(), r.number(item, path, "u"), r.number(item, path, "v"),
                        r.number(item, path, "c")});
    }

    const CostFunction cost = read_cost(r, r.member(doc, "$", "cost"));

    std::optional<double> tolerance;
    if (doc.contains("solver")) {
        const json& s = r.object(doc["solver"], "solver");
        r.only_keys(s, "solver", {"tolerance"});
        if (s.contains("tolerance")) {
            tolerance = r.number(s, "solver", "tolerance");
            if (!(*tolerance > 0.0)) r.fail("solver.tolerance", "must be positive");
        }
    }

    std::optional<GridSpec> grid;
    if (doc.contains("grid")) grid = read_grid(r, doc["grid"]);

    try {
        return {ProblemInstance(std::move(alts), cost), tolerance, grid};
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(source) + ": " + e.what());
    }
}

InstanceFile load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), path.string());
}

std::string serialize_instance(const InstanceFile& file) {
    json doc;
    doc["alternatives"] = json::array();
    for (const auto& a : file.instance.alternatives())
        doc["alternatives"].push_back({{"id", a.id}, {"u", a.u}, {"v", a.v}, {"c", a.c}});
    if (const auto* f = std::get_if<PiecewiseLinear>(&file.instance.cost()))
        doc["cost"] = {{"type", "piecewise_linear"}, {"l", f->l}, {"k", f->k}, {"w", f->w}};
    else if (const auto* p = std::get_if<Power>(&file.instance.cost()))
        doc["cost"] = {{"type", "power"}, {"alpha", p->alpha}, {"gamma", p->gamma}};
    if (file.tolerance) doc["solver"] = {{"tolerance", *file.tolerance}};
    if (file.grid) {
        const GridSpec& g = *file.grid;
        doc["grid"] = {{"price_step", g.price_step},
                       {"price_min", g.price_min},
                       {"price_max", g.price_max},
                       {"max_menu_size", g.max_menu_size},
                       {"include_analytic_prices", g.include_analytic_prices}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace selfcontrol
