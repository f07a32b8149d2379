#include "crsegre/input.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace crsegre {

namespace {

struct RawSection {
    std::string kind;
    std::map<std::string, std::string> kv;
    int line = 0;
};

std::vector<RawSection> split_sections(const std::string& text) {
    std::vector<RawSection> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    RawSection* cur = nullptr;
    while (std::getline(is, line)) {
        ++lineno;
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        if (line[a] == '#') continue;
        std::string rest = line.substr(a);
        if (rest[0] == '[') {
            size_t close = rest.find(']');
            if (close == std::string::npos) throw ParseError("unterminated section header", lineno, 1);
            out.push_back(RawSection{rest.substr(1, close - 1), {}, lineno});
            cur = &out.back();
            rest = rest.substr(close + 1);
        }
        if (!cur) throw ParseError("content before any section header", lineno, 1);
        // parse key=value pairs; values run to the next " key=" boundary on
        // header lines, else to end of line
        std::istringstream ls(rest);
        std::string tok;
        std::string pending_key;
        std::string pending_val;
        auto flush = [&]() {
            if (!pending_key.empty()) cur->kv[pending_key] = pending_val;
            pending_key.clear();
            pending_val.clear();
        };
        while (ls >> tok) {
            size_t eq = tok.find('=');
            bool keyish = eq != std::string::npos && eq > 0 &&
                          (std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_');
            if (keyish) {
                flush();
                pending_key = tok.substr(0, eq);
                pending_val = tok.substr(eq + 1);
            } else {
                if (pending_key.empty())
                    throw ParseError("stray token '" + tok + "'", lineno, 1);
                pending_val += " " + tok;
            }
        }
        flush();
    }
    return out;
}

int to_int(const RawSection& s, const std::string& key) {
    auto it = s.kv.find(key);
    if (it == s.kv.end()) throw ParseError("missing key '" + key + "'", s.line, 1);
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw ParseError("bad integer for key '" + key + "'", s.line, 1);
    }
}

std::string need(const RawSection& s, const std::string& key) {
    auto it = s.kv.find(key);
    if (it == s.kv.end()) throw ParseError("missing key '" + key + "'", s.line, 1);
    return it->second;
}

}  // namespace

InputSet parse_input(const std::string& text) {
    InputSet set;
    auto sections = split_sections(text);

    // manifolds first so maps can resolve them in any order
    for (const auto& s : sections) {
        if (s.kind != "manifold") continue;
        std::string name = need(s, "name");
        int m = to_int(s, "m"), d = to_int(s, "d"), order = to_int(s, "order");
        if (order < 4) throw ParseError("order must be at least 4", s.line, 1);
        Frame fr(m, d, false);
        SeriesVector tb;
        for (int j = 1; j <= d; ++j) {
            std::string key = "theta_bar_" + std::to_string(j);
            tb.push_back(parse_series(need(s, key), fr.ambient, order, s.line));
        }
        GenericManifold M = GenericManifold::from_theta_bar(m, d, order, tb);
        auto [r1, r2] = verify_reality(M);
        for (const auto& r : r1)
            if (!r.is_zero())
                throw ParseError("manifold '" + name + "' fails the reality identities", s.line, 1);
        for (const auto& r : r2)
            if (!r.is_zero())
                throw ParseError("manifold '" + name + "' fails the reality identities", s.line, 1);
        set.manifolds.emplace(name, std::move(M));
    }
    for (const auto& s : sections) {
        if (s.kind == "manifold") continue;
        if (s.kind == "map") {
            std::string name = need(s, "name");
            auto src_it = set.manifolds.find(need(s, "source"));
            auto dst_it = set.manifolds.find(need(s, "target"));
            if (src_it == set.manifolds.end() || dst_it == set.manifolds.end())
                throw ParseError("map '" + name + "' references an undeclared manifold", s.line, 1);
            const GenericManifold& src = src_it->second;
            const GenericManifold& dst = dst_it->second;
            SeriesVector g, f;
            for (int j = 1; j <= dst.m() + dst.d(); ++j) {
                std::string key = "h_" + std::to_string(j);
                Series comp = parse_series(need(s, key), src.frame().t, src.order(), s.line);
                if (j <= dst.m())
                    g.push_back(comp);
                else
                    f.push_back(comp);
            }
            set.maps.emplace(name, FormalMap(src, dst, g, f));
        } else if (s.kind == "system") {
            std::string name = need(s, "name");
            InputSystem sys;
            sys.nw = to_int(s, "nw");
            sys.ny = to_int(s, "ny");
            sys.order = to_int(s, "order");
            std::vector<std::string> vars;
            for (int i = 1; i <= sys.nw; ++i) vars.push_back("w" + std::to_string(i));
            for (int i = 1; i <= sys.ny; ++i) {
                vars.push_back("t" + std::to_string(i));
                sys.y_vars.push_back("t" + std::to_string(i));
            }
            std::vector<std::string> wvars(vars.begin(), vars.begin() + sys.nw);
            for (int j = 1;; ++j) {
                auto it = s.kv.find("r_" + std::to_string(j));
                if (it == s.kv.end()) break;
                sys.R.push_back(parse_series(it->second, vars, sys.order, s.line));
            }
            for (int k = 1; k <= sys.ny; ++k)
                sys.g_hat.push_back(
                    parse_series(need(s, "g_" + std::to_string(k)), wvars, sys.order, s.line));
            if (sys.R.empty()) throw ParseError("system '" + name + "' has no equations", s.line, 1);
            set.systems.emplace(name, std::move(sys));
        } else {
            throw ParseError("unknown section kind '" + s.kind + "'", s.line, 1);
        }
    }
    return set;
}

InputSet parse_input_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file " + path, 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_input(ss.str());
}

std::string serialize_manifold(const std::string& name, const GenericManifold& M) {
    std::ostringstream os;
    os << "[manifold] name=" << name << " m=" << M.m() << " d=" << M.d() << " order=" << M.order()
       << "\n";
    for (int j = 0; j < M.d(); ++j)
        os << "theta_bar_" << (j + 1) << "=" << M.theta_bar()[static_cast<size_t>(j)].str() << "\n";
    return os.str();
}

std::string serialize_map(const std::string& name, const std::string& source,
                          const std::string& target, const FormalMap& h) {
    std::ostringstream os;
    os << "[map] name=" << name << " source=" << source << " target=" << target << "\n";
    for (int j = 0; j < h.n_target(); ++j) os << "h_" << (j + 1) << "=" << h.component(j).str() << "\n";
    return os.str();
}

}  // namespace crsegre
