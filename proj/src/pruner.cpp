#include "tiletrack/pruner.hpp"

#include <set>

#include "tiletrack/io.hpp"

namespace tiletrack {

int PruneInstance::n_variables() const {
    int n = 0;
    for (const auto& f : frames) n += static_cast<int>(f.size());
    return n;
}

long long PruneInstance::total_tiles() const {
    long long n = 0;
    for (const auto& f : frames)
        for (const Polyomino& p : f) n += p.size();
    return n;
}

std::vector<VarRef> variable_order(const PruneInstance& inst) {
    std::vector<VarRef> order;
    for (int t = 0; t < inst.n_frames(); ++t)
        for (int k = 0; k < static_cast<int>(inst.frames[t].size()); ++k)
            order.push_back({inst.f_start + t, k});
    return order;
}

std::vector<Constraint> build_constraints(const PruneInstance& inst) {
    const int rows = inst.gaps.rows();
    const int cols = inst.gaps.cols();
    const int nf = inst.n_frames();

    // var index lookup and per-tile coverage lists by ordinal offset.
    std::vector<int> frame_base(nf + 1, 0);
    for (int t = 0; t < nf; ++t) frame_base[t + 1] = frame_base[t] + static_cast<int>(inst.frames[t].size());

    // covering[tile][t] = variables covering the tile at ordinal offset t.
    std::vector<std::vector<std::vector<int>>> covering(
        static_cast<size_t>(rows) * cols, std::vector<std::vector<int>>(nf));
    for (int t = 0; t < nf; ++t) {
        for (int k = 0; k < static_cast<int>(inst.frames[t].size()); ++k) {
            const int var = frame_base[t] + k;
            for (const TilePos& tile : inst.frames[t][k].tiles) {
                if (tile.row < 0 || tile.row >= rows || tile.col < 0 || tile.col >= cols)
                    throw std::invalid_argument("prune instance: polyomino tile outside grid");
                covering[static_cast<size_t>(tile.row) * cols + tile.col][t].push_back(var);
            }
        }
    }

    std::set<Constraint> seen;
    std::vector<Constraint> out;
    auto emit = [&](int tile_flat, int t0, int t1) { // ordinal offsets, inclusive
        Constraint vars;
        for (int t = std::max(0, t0); t <= std::min(nf - 1, t1); ++t)
            for (int v : covering[tile_flat][t]) vars.push_back(v);
        if (vars.empty()) return;
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        if (seen.insert(vars).second) out.push_back(std::move(vars));
    };

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int g = inst.gaps.at(r, c);
            if (g < 1) throw std::invalid_argument("prune instance: gap entries must be >= 1");
            const int tile_flat = r * cols + c;
            // Full spans inside the window.
            for (int f = inst.f_start; f + g - 1 <= inst.f_end; ++f)
                emit(tile_flat, f - inst.f_start, f - inst.f_start + g - 1);
            // Boundary span from carried-in coverage; deadlines beyond the
            // window defer to the next window, expired deadlines are vacuous.
            const int f0 = inst.last_covered.rows() ? inst.last_covered.at(r, c) : 0;
            if (f0 > 0 && f0 < inst.f_start) {
                const int deadline = f0 + g;
                if (deadline >= inst.f_start && deadline <= inst.f_end)
                    emit(tile_flat, 0, deadline - inst.f_start);
            }
        }
    }
    return out;
}

namespace {

struct Solver {
    const std::vector<int>& size;                // per variable
    const std::vector<Constraint>& constraints;
    std::vector<std::vector<int>> var_constraints; // constraints containing each variable
    int n_vars;

    std::vector<int> selected_count; // per constraint
    std::vector<int> undecided_count;
    std::vector<int8_t> value; // -1 undecided, 0, 1
    int unsat = 0;

    long long best_cost;
    std::vector<int> best_set;
    bool have_best = false;

    long long nodes = 0;
    long long node_budget;
    bool aborted = false;

    Solver(const std::vector<int>& sizes, const std::vector<Constraint>& cons, long long budget)
        : size(sizes), constraints(cons), n_vars(static_cast<int>(sizes.size())), node_budget(budget) {
        var_constraints.resize(n_vars);
        for (size_t ci = 0; ci < cons.size(); ++ci)
            for (int v : cons[ci]) var_constraints[v].push_back(static_cast<int>(ci));
        selected_count.assign(cons.size(), 0);
        undecided_count.assign(cons.size(), 0);
        for (size_t ci = 0; ci < cons.size(); ++ci)
            undecided_count[ci] = static_cast<int>(cons[ci].size());
        value.assign(n_vars, -1);
        unsat = static_cast<int>(cons.size());
        best_cost = greedy_cost();
    }

    /// Greedy set cover: repeatedly take the variable satisfying the most
    /// open constraints per tile. Always feasible (selecting everything is).
    long long greedy_cost() {
        std::vector<char> sat(constraints.size(), 0);
        std::vector<char> taken(n_vars, 0);
        size_t open = constraints.size();
        long long cost = 0;
        greedy_set.clear();
        while (open > 0) {
            int best_var = -1;
            double best_score = -1;
            for (int v = 0; v < n_vars; ++v) {
                if (taken[v]) continue;
                int gain = 0;
                for (int ci : var_constraints[v])
                    if (!sat[ci]) ++gain;
                if (gain == 0) continue;
                const double score = static_cast<double>(gain) / size[v];
                if (score > best_score) {
                    best_score = score;
                    best_var = v;
                }
            }
            if (best_var < 0) break; // open constraints unreachable: cannot happen
            taken[best_var] = 1;
            greedy_set.push_back(best_var);
            cost += size[best_var];
            for (int ci : var_constraints[best_var])
                if (!sat[ci]) {
                    sat[ci] = 1;
                    --open;
                }
        }
        std::sort(greedy_set.begin(), greedy_set.end());
        return cost;
    }
    std::vector<int> greedy_set;

    /// Admissible bound: sum of min undecided sizes over variable-disjoint
    /// unsatisfied constraints. Returns -1 when some constraint is dead.
    long long lower_bound() const {
        long long lb = 0;
        std::vector<char> used(n_vars, 0);
        for (size_t ci = 0; ci < constraints.size(); ++ci) {
            if (selected_count[ci] > 0) continue;
            if (undecided_count[ci] == 0) return -1;
            int min_size = -1;
            bool disjoint = true;
            for (int v : constraints[ci]) {
                if (value[v] != -1) continue;
                if (used[v]) disjoint = false;
                if (min_size < 0 || size[v] < min_size) min_size = size[v];
            }
            if (!disjoint) continue;
            lb += min_size;
            for (int v : constraints[ci])
                if (value[v] == -1) used[v] = 1;
        }
        return lb;
    }

    void record(long long cost, const std::vector<int>& sel) {
        if (cost < best_cost || (cost == best_cost && !have_best)) {
            best_cost = cost;
            best_set = sel;
            have_best = true;
        }
    }

    void assign(int v, int val) {
        value[v] = static_cast<int8_t>(val);
        for (int ci : var_constraints[v]) {
            --undecided_count[ci];
            if (val == 1 && selected_count[ci]++ == 0) --unsat;
        }
    }
    void unassign(int v, int val) {
        value[v] = -1;
        for (int ci : var_constraints[v]) {
            ++undecided_count[ci];
            if (val == 1 && --selected_count[ci] == 0) ++unsat;
        }
    }

    // DFS in ascending variable order, select-branch first: the first
    // optimum found is the lexicographically smallest selected set.
    void dfs(int v, long long cost, std::vector<int>& sel) {
        if (aborted) return;
        if (++nodes > node_budget) {
            aborted = true;
            return;
        }
        if (unsat == 0) {
            record(cost, sel);
            return;
        }
        if (v == n_vars) return; // unsatisfied constraints remain
        const long long lb = lower_bound();
        if (lb < 0 || cost + lb > best_cost) return;

        // Skip variables that serve no constraint: an optimum never pays for
        // them.
        bool useful = false;
        for (int ci : var_constraints[v])
            if (selected_count[ci] == 0) {
                useful = true;
                break;
            }
        if (useful) {
            assign(v, 1);
            sel.push_back(v);
            dfs(v + 1, cost + size[v], sel);
            sel.pop_back();
            unassign(v, 1);
        }
        assign(v, 0);
        dfs(v + 1, cost, sel);
        unassign(v, 0);
    }
};

PruneSolution make_solution(const PruneInstance& inst, const std::vector<int>& chosen,
                            const std::vector<int>& sizes, bool optimal) {
    const std::vector<VarRef> order = variable_order(inst);
    PruneSolution sol;
    sol.optimal = optimal;
    for (int v : chosen) {
        sol.selected.push_back(order[v]);
        sol.objective += sizes[v];
    }
    std::sort(sol.selected.begin(), sol.selected.end());
    return sol;
}

} // namespace

PruneSolution solve_exact(const PruneInstance& inst, long long node_budget) {
    const std::vector<VarRef> order = variable_order(inst);
    std::vector<int> sizes;
    sizes.reserve(order.size());
    for (const VarRef& v : order) sizes.push_back(inst.frames[v.frame - inst.f_start][v.k].size());
    const std::vector<Constraint> constraints = build_constraints(inst);
    if (constraints.empty()) return PruneSolution{};

    Solver solver(sizes, constraints, node_budget);
    std::vector<int> sel;
    solver.dfs(0, 0, sel);
    if (solver.aborted && !solver.have_best)
        return make_solution(inst, solver.greedy_set, sizes, false);
    if (solver.aborted)
        return make_solution(inst, solver.best_set, sizes, false);
    if (!solver.have_best) // greedy was already optimal and DFS confirmed the bound
        return make_solution(inst, solver.greedy_set, sizes, true);
    return make_solution(inst, solver.best_set, sizes, true);
}

PruneSolution solve_bruteforce(const PruneInstance& inst) {
    const std::vector<VarRef> order = variable_order(inst);
    const int n = static_cast<int>(order.size());
    if (n > 20) throw std::invalid_argument("solve_bruteforce: more than 20 variables");
    std::vector<int> sizes;
    for (const VarRef& v : order) sizes.push_back(inst.frames[v.frame - inst.f_start][v.k].size());
    const std::vector<Constraint> constraints = build_constraints(inst);
    if (constraints.empty()) return PruneSolution{};

    long long best_cost = -1;
    uint32_t best_mask = 0;
    auto lex_less = [&](uint32_t a, uint32_t b) {
        // Compare selected index sets lexicographically.
        for (int v = 0; v < n; ++v) {
            const bool ia = a >> v & 1, ib = b >> v & 1;
            if (ia != ib) return ia; // containing the smaller index wins
        }
        return false;
    };
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (const Constraint& c : constraints) {
            bool sat = false;
            for (int v : c)
                if (mask >> v & 1) {
                    sat = true;
                    break;
                }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        long long cost = 0;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) cost += sizes[v];
        if (best_cost < 0 || cost < best_cost || (cost == best_cost && lex_less(mask, best_mask))) {
            best_cost = cost;
            best_mask = mask;
        }
    }
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
        if (best_mask >> v & 1) chosen.push_back(v);
    return make_solution(inst, chosen, sizes, true);
}

bool selection_feasible(const PruneInstance& inst, const std::vector<VarRef>& selected) {
    const std::vector<VarRef> order = variable_order(inst);
    std::set<VarRef> sel(selected.begin(), selected.end());
    std::vector<char> bits(order.size(), 0);
    for (size_t v = 0; v < order.size(); ++v) bits[v] = sel.count(order[v]) ? 1 : 0;
    for (const Constraint& c : build_constraints(inst)) {
        bool sat = false;
        for (int v : c)
            if (bits[v]) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Serialization

PruneInstance load_instance(const std::string& path) {
    const nlohmann::json j = load_json(path);
    PruneInstance inst;
    inst.f_start = j.at("f_start").get<int>();
    inst.f_end = j.at("f_end").get<int>();
    const int h = j.at("h").get<int>();
    const int w = j.at("w").get<int>();
    inst.gaps = Grid2D<int>(h, w, 1);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) inst.gaps.at(r, c) = j.at("gaps").at(r).at(c).get<int>();
    inst.last_covered = Grid2D<int>(h, w, 0);
    if (j.contains("last_covered"))
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) inst.last_covered.at(r, c) = j.at("last_covered").at(r).at(c).get<int>();
    inst.frames.resize(inst.f_end - inst.f_start + 1);
    for (const auto& jf : j.at("frames")) {
        const int f = jf.at("f").get<int>();
        if (f < inst.f_start || f > inst.f_end) throw std::runtime_error("instance: frame outside window");
        auto& list = inst.frames[f - inst.f_start];
        for (const auto& jp : jf.at("polyominoes")) {
            std::vector<TilePos> tiles;
            for (const auto& jt : jp) tiles.push_back({jt.at(0).get<int>(), jt.at(1).get<int>()});
            list.push_back(make_polyomino(f, std::move(tiles), static_cast<int>(list.size())));
        }
    }
    return inst;
}

void save_instance(const PruneInstance& inst, const std::string& path) {
    nlohmann::json j;
    j["f_start"] = inst.f_start;
    j["f_end"] = inst.f_end;
    j["h"] = inst.gaps.rows();
    j["w"] = inst.gaps.cols();
    nlohmann::json gaps = nlohmann::json::array();
    for (int r = 0; r < inst.gaps.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < inst.gaps.cols(); ++c) row.push_back(inst.gaps.at(r, c));
        gaps.push_back(std::move(row));
    }
    j["gaps"] = std::move(gaps);
    j["frames"] = nlohmann::json::array();
    for (int t = 0; t < inst.n_frames(); ++t) {
        nlohmann::json jf;
        jf["f"] = inst.f_start + t;
        jf["polyominoes"] = nlohmann::json::array();
        for (const Polyomino& p : inst.frames[t]) {
            nlohmann::json jp = nlohmann::json::array();
            for (const TilePos& tile : p.tiles) jp.push_back({tile.row, tile.col});
            jf["polyominoes"].push_back(std::move(jp));
        }
        j["frames"].push_back(std::move(jf));
    }
    save_json(j, path);
}

void save_solution(const PruneSolution& sol, const std::string& path) {
    nlohmann::json j;
    j["objective"] = sol.objective;
    j["optimal"] = sol.optimal;
    j["selected"] = nlohmann::json::array();
    for (const VarRef& v : sol.selected) j["selected"].push_back({v.frame, v.k});
    save_json(j, path);
}

} // namespace tiletrack
