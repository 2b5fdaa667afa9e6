#include <lllmt/witness.hh>

#include <lllmt/criteria.hh>

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace lllmt {

WitnessTree::WitnessTree(EventId root_label)
{
    _nodes.push_back({root_label, 1, std::nullopt, {}, true});
    _live = 1;
}

auto WitnessTree::add_child(std::size_t parent, EventId label) -> std::size_t
{
    auto & p = _nodes.at(parent);
    if (! p.alive)
        throw std::logic_error("add_child: parent node is not alive");
    std::size_t id = _nodes.size();
    std::size_t depth = p.depth + 1;
    p.children.push_back(id);
    _nodes.push_back({label, depth, parent, {}, true});
    ++_live;
    return id;
}

void WitnessTree::remove_leaf(std::size_t node)
{
    auto & n = _nodes.at(node);
    if (! n.alive || ! n.children.empty())
        throw std::logic_error("remove_leaf: node is not a live leaf");
    n.alive = false;
    --_live;
    if (n.parent) {
        auto & siblings = _nodes[*n.parent].children;
        siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    }
}

auto WitnessTree::height() const -> std::size_t
{
    std::size_t h = 0;
    for (auto & n : _nodes)
        if (n.alive)
            h = std::max(h, n.depth);
    return h;
}

auto WitnessTree::preorder() const -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    if (empty())
        return out;
    std::vector<std::size_t> stack{0};
    while (! stack.empty()) {
        auto k = stack.back();
        stack.pop_back();
        out.push_back(k);
        auto & ch = _nodes[k].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

auto WitnessTree::labels() const -> std::vector<EventId>
{
    std::vector<EventId> out;
    for (auto k : preorder())
        out.push_back(_nodes[k].label);
    return out;
}

auto WitnessTree::canonical() const -> std::string
{
    if (empty())
        return "()";
    std::function<std::string(std::size_t)> form = [&](std::size_t k) {
        std::vector<std::pair<EventId, std::string>> kids;
        for (auto c : _nodes[k].children)
            kids.emplace_back(_nodes[c].label, form(c));
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + std::to_string(_nodes[k].label);
        for (auto & [label, sub] : kids)
            s += " " + sub;
        return s + ")";
    };
    return form(0);
}

auto WitnessTree::hash() const -> std::size_t
{
    return std::hash<std::string>{}(canonical());
}

auto WitnessTree::dump() const -> std::string
{
    std::ostringstream out;
    for (auto k : preorder()) {
        auto & n = _nodes[k];
        out << std::string(2 * (n.depth - 1), ' ') << n.depth << ' ' << n.label << '\n';
    }
    return out.str();
}

namespace {

auto eligible(const Instance & instance, const WitnessTree & tree, std::size_t v, EventId label, std::vector<EventId> & scratch) -> bool
{
    auto & node = tree.node(v);
    scratch.clear();
    for (auto c : node.children) {
        EventId l = tree.node(c).label;
        if (l == label)
            return false;
        scratch.push_back(l);
    }
    scratch.push_back(label);
    return is_orderable(instance, instance.event(node.label), node.label, scratch);
}

}

auto build_witness_tree(const Instance & instance, const ExecutionLog & log, std::size_t t, std::size_t t0) -> WitnessTree
{
    if (t < 1 || t > log.size())
        throw std::out_of_range("build_witness_tree: step " + std::to_string(t) + " outside 1.." + std::to_string(log.size()));
    if (t0 > t)
        return {};
    if (t0 < 1)
        t0 = 1;
    WitnessTree tree(log.steps[t - 1].event);
    std::vector<EventId> scratch;
    for (std::size_t k = t - 1; k >= t0; --k) {
        EventId b = log.steps[k - 1].event;
        // Deepest eligible node; preorder scan keeps the first one met at each depth.
        std::optional<std::size_t> best;
        for (auto v : tree.preorder())
            if ((! best || tree.node(v).depth > tree.node(*best).depth) && eligible(instance, tree, v, b, scratch))
                best = v;
        if (best)
            tree.add_child(*best, b);
    }
    return tree;
}

auto active_values(const Instance & instance, const WitnessTree & tree) -> std::vector<std::optional<Value>>
{
    std::vector<std::optional<Value>> out(instance.variable_count());
    std::vector<std::size_t> deepest(instance.variable_count(), 0);
    for (auto k : tree.preorder()) {
        auto & n = tree.node(k);
        for (auto & term : instance.event(n.label).terms()) {
            auto i = term.var;
            if (n.depth > deepest[i]) {
                deepest[i] = n.depth;
                out[i] = term.value;
            }
            else if (n.depth == deepest[i] && out[i] != term.value)
                throw std::logic_error("deepest nodes involving variable " + std::to_string(i) + " disagree");
        }
    }
    return out;
}

auto weight(const Instance & instance, const WitnessTree & tree) -> double
{
    double w = 1.0;
    for (auto k : tree.preorder())
        w *= instance.prob(tree.node(k).label);
    return w;
}

auto check_tree_invariants(const Instance & instance, const WitnessTree & tree) -> std::optional<std::string>
{
    std::map<EventId, std::vector<std::size_t>> leaf_depths;
    for (auto k : tree.preorder()) {
        auto & n = tree.node(k);
        std::vector<EventId> kids;
        for (auto c : n.children)
            kids.push_back(tree.node(c).label);
        auto sorted = kids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return "node " + std::to_string(k) + " has repeated child labels";
        if (! kids.empty() && ! is_orderable(instance, instance.event(n.label), n.label, kids))
            return "children of node " + std::to_string(k) + " are not orderable to its label";
        if (n.children.empty())
            leaf_depths[n.label].push_back(n.depth);
    }
    for (auto & [label, depths] : leaf_depths) {
        std::sort(depths.begin(), depths.end());
        if (std::adjacent_find(depths.begin(), depths.end()) != depths.end())
            return "two leaves labelled " + std::to_string(label) + " share a depth";
    }
    try {
        (void)active_values(instance, tree);
    }
    catch (const std::logic_error & e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

auto peel(WitnessTree & tree, EventId event) -> bool
{
    std::optional<std::size_t> best;
    for (auto k : tree.preorder()) {
        auto & n = tree.node(k);
        if (n.label == event && n.children.empty() && (! best || n.depth > tree.node(*best).depth))
            best = k;
    }
    if (best)
        tree.remove_leaf(*best);
    return best.has_value();
}

auto verify_replay(const Instance & instance, const ExecutionLog & log, std::size_t t) -> ReplayReport
{
    ReplayReport report;
    auto fail = [&](std::string msg) {
        report.ok = false;
        report.failures.push_back(std::move(msg));
    };
    if (auto problem = check_log(instance, log))
        fail("invalid log: " + *problem);
    if (log.initial.size() != instance.variable_count()
        || std::any_of(log.steps.begin(), log.steps.end(), [&](auto & s) { return s.event >= instance.event_count(); }))
        return report;
    auto tree = build_witness_tree(instance, log, t, 1);
    Assignment state = log.initial;
    for (std::size_t t0 = 1; t0 <= t + 1; ++t0) {
        auto direct = t0 <= t ? build_witness_tree(instance, log, t, t0) : WitnessTree{};
        if (tree != direct)
            fail("step " + std::to_string(t0) + ": peeled tree " + tree.canonical() + " differs from built tree " + direct.canonical());
        try {
            auto active = active_values(instance, direct);
            for (VarId i = 0; i < active.size(); ++i)
                if (active[i] && state[i] != *active[i])
                    fail("step " + std::to_string(t0) + ", variable " + std::to_string(i) + ": value " + std::to_string(state[i])
                        + " but active value " + std::to_string(*active[i]));
        }
        catch (const std::logic_error & e) {
            fail("step " + std::to_string(t0) + ": " + e.what());
        }
        if (t0 <= t) {
            auto & step = log.steps[t0 - 1];
            peel(tree, step.event);
            for (auto & term : step.values)
                state[term.var] = term.value;
        }
    }
    return report;
}

auto verify_distinct(const Instance & instance, const ExecutionLog & log) -> ReplayReport
{
    ReplayReport report;
    std::map<std::string, std::size_t> seen;
    for (std::size_t t = 1; t <= log.size(); ++t) {
        auto form = build_witness_tree(instance, log, t).canonical();
        auto [it, fresh] = seen.emplace(form, t);
        if (! fresh) {
            report.ok = false;
            report.failures.push_back("steps " + std::to_string(it->second) + " and " + std::to_string(t) + " share the tree " + form);
        }
    }
    return report;
}

}
