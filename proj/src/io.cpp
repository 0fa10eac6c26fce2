#include "dyadtree/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dyadtree {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim spaces and a possible trailing CR
        std::size_t b = field.find_first_not_of(" \t\r");
        std::size_t e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw DataError("malformed " + what + ": '" + s + "'");
    return v;
}

int parse_label(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    if (t == "1") return 1;
    if (t == "-1") return -1;
    throw DataError("label must be -1 or +1, got '" + s + "'");
}

// Header x1,...,xd[,y]; returns d and whether a label column is present.
std::pair<int, bool> parse_header(const std::string& line, const std::string& path) {
    const auto fields = split_csv_line(line);
    if (fields.empty()) throw DataError(path + ": empty header");
    bool has_y = fields.back() == "y";
    const int d = static_cast<int>(fields.size()) - (has_y ? 1 : 0);
    if (d < 1) throw DataError(path + ": no coordinate columns");
    for (int a = 0; a < d; ++a)
        if (fields[static_cast<std::size_t>(a)] != "x" + std::to_string(a + 1))
            throw DataError(path + ": expected header column x" + std::to_string(a + 1));
    return {d, has_y};
}

} // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    const auto [d, has_y] = parse_header(line, path);
    if (!has_y) throw DataError(path + ": dataset requires a y column");

    Dataset data;
    data.dim = d;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 1)
            throw DataError(path + ": row with wrong field count");
        LabeledSample s;
        s.x.resize(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            s.x[static_cast<std::size_t>(a)] = parse_double(fields[static_cast<std::size_t>(a)], "coordinate");
        s.y = parse_label(fields[static_cast<std::size_t>(d)]);
        data.samples.push_back(std::move(s));
    }
    validate(data);
    return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (int a = 0; a < data.dim; ++a) out << "x" << (a + 1) << ",";
    out << "y\n";
    for (const auto& s : data.samples) {
        for (double v : s.x) out << format_double(v) << ",";
        out << s.y << "\n";
    }
}

std::vector<std::vector<double>> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    const auto [d, has_y] = parse_header(line, path);

    std::vector<std::vector<double>> points;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + (has_y ? 1 : 0))
            throw DataError(path + ": row with wrong field count");
        std::vector<double> p(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            p[static_cast<std::size_t>(a)] = parse_double(fields[static_cast<std::size_t>(a)], "coordinate");
        points.push_back(std::move(p));
    }
    return points;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "y\n";
    for (int y : labels) out << y << "\n";
}

void save_model_json(const std::string& path, const SetClassifier& model, const ModelMeta& meta) {
    const SetClassifier* tree_model = &model;
    SetClassifier converted;
    if (model.grid_form()) {
        converted = grid_as_tree(*model.grid_form());
        converted.algorithm = model.algorithm;
        converted.budget = model.budget;
        tree_model = &converted;
    }
    const TreeClassifier& tc = *tree_model->tree_form();

    std::vector<DyadicCube> cubes(tc.tree.cubes().begin(), tc.tree.cubes().end());
    std::sort(cubes.begin(), cubes.end(), address_less); // breadth-first by address

    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& c : cubes) {
        nlohmann::json node;
        node["level"] = c.level;
        node["index"] = c.index;
        const bool leaf = !tc.tree.has_children(c);
        node["is_leaf"] = leaf;
        bool positive = false;
        if (leaf) {
            auto it = tc.positive.find(c);
            if (it != tc.positive.end()) {
                positive = true;
                if (it->second.cut) {
                    node["decoration"] = {{"normal", it->second.cut->normal},
                                          {"offset", it->second.cut->offset},
                                          {"positive_side", it->second.side}};
                }
            }
        }
        node["leaf_positive"] = positive;
        nodes.push_back(std::move(node));
    }

    nlohmann::json doc;
    doc["dimension"] = tree_model->dim();
    doc["algorithm"] = algorithm_name(tree_model->algorithm);
    doc["nodes"] = std::move(nodes);
    doc["meta"] = {{"m_star", meta.m_star}, {"seed", meta.seed}, {"j_max", meta.j_max}};

    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

LoadedModel load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }

    try {
        const int dim = doc.at("dimension").get<int>();
        if (dim < 1) throw DataError(path + ": bad dimension");
        const Algorithm algo = algorithm_from_name(doc.at("algorithm").get<std::string>());

        std::vector<DyadicCube> cubes;
        for (const auto& node : doc.at("nodes")) {
            DyadicCube c;
            c.level = node.at("level").get<int>();
            c.index = node.at("index").get<std::vector<std::uint32_t>>();
            if (c.level < 0 || c.level > kMaxCubeLevel || c.dim() != dim)
                throw DataError(path + ": bad node address");
            for (std::uint32_t k : c.index)
                if (static_cast<std::uint64_t>(k) >= (1ull << c.level))
                    throw DataError(path + ": node index out of range");
            cubes.push_back(std::move(c));
        }

        TreeClassifier tc;
        try {
            tc.tree = CompleteTree::from_cubes(dim, cubes);
        } catch (const std::invalid_argument& e) {
            throw DataError(path + ": " + e.what());
        }

        std::size_t i = 0;
        for (const auto& node : doc.at("nodes")) {
            const DyadicCube& c = cubes[i++];
            const bool leaf = node.at("is_leaf").get<bool>();
            if (leaf != !tc.tree.has_children(c))
                throw DataError(path + ": is_leaf flag inconsistent with structure");
            if (!node.at("leaf_positive").get<bool>()) continue;
            if (!leaf) throw DataError(path + ": internal node marked positive");
            HCell cell{c, std::nullopt, 0};
            if (node.contains("decoration")) {
                const auto& deco = node.at("decoration");
                Hyperplane h;
                h.normal = deco.at("normal").get<std::vector<double>>();
                h.offset = deco.at("offset").get<double>();
                if (h.dim() != dim || zero_normal(h))
                    throw DataError(path + ": bad decoration normal");
                cell.cut = std::move(h);
                cell.side = deco.at("positive_side").get<int>();
                if (cell.side != 0 && cell.side != 1)
                    throw DataError(path + ": decoration side must be 0 or 1");
            }
            tc.positive.emplace(c, std::move(cell));
        }

        LoadedModel out;
        out.classifier.algorithm = algo;
        out.classifier.form = std::move(tc);
        const auto& meta = doc.at("meta");
        out.meta.m_star = meta.at("m_star").get<int>();
        out.meta.seed = meta.at("seed").get<std::uint64_t>();
        out.meta.j_max = meta.at("j_max").get<int>();
        out.classifier.budget = out.meta.m_star;
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": missing or mistyped field: " + e.what());
    }
}

} // namespace dyadtree
