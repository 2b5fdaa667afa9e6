#include <lllmt/errors.hh>
#include <lllmt/instance_io.hh>

#include "text.hh"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lllmt {

namespace {
    using text::parse_number;
    using text::strip_comment;

    auto parse_probability(std::string_view t, std::size_t line) -> double { return text::parse_real(t, line, "probability"); }

    auto parse_terms(std::string_view rest, std::size_t line) -> std::vector<Term>
    {
        std::string compact;
        for (char c : rest)
            if (! std::isspace(static_cast<unsigned char>(c)))
                compact.push_back(c);
        std::vector<Term> terms;
        std::size_t pos = 0;
        while (pos < compact.size()) {
            if (compact[pos] != '(')
                throw InputError(line, "expected '(' at column " + std::to_string(pos + 1) + " of the term list");
            auto comma = compact.find(',', pos);
            auto close = compact.find(')', pos);
            if (comma == std::string::npos || close == std::string::npos || comma > close)
                throw InputError(line, "malformed term; expected (var,value)");
            auto var = parse_number<VarId>(std::string_view(compact).substr(pos + 1, comma - pos - 1), line, "variable");
            auto val = parse_number<Value>(std::string_view(compact).substr(comma + 1, close - comma - 1), line, "value");
            terms.push_back({var, val});
            pos = close + 1;
        }
        return terms;
    }
}

auto read_instance(std::istream & in) -> Instance
{
    std::optional<std::size_t> n;
    std::vector<std::vector<double>> probs;
    std::vector<bool> have_dom;
    std::vector<BadEvent> events;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream line(strip_comment(raw));
        std::string keyword;
        if (! (line >> keyword))
            continue;

        if (keyword == "vars") {
            if (n)
                throw InputError(line_no, "duplicate 'vars' header");
            std::string count;
            if (! (line >> count))
                throw InputError(line_no, "'vars' needs a count");
            n = parse_number<std::size_t>(count, line_no, "variable count");
            probs.assign(*n, {});
            have_dom.assign(*n, false);
            std::string extra;
            if (line >> extra)
                throw InputError(line_no, "unexpected token '" + extra + "' after vars count");
        }
        else if (keyword == "dom") {
            if (! n)
                throw InputError(line_no, "'dom' before 'vars'");
            if (! events.empty())
                throw InputError(line_no, "'dom' after the first 'ev'");
            std::string index;
            if (! (line >> index))
                throw InputError(line_no, "'dom' needs a variable index");
            auto i = parse_number<std::size_t>(index, line_no, "variable index");
            if (i >= *n)
                throw InputError(line_no, "variable " + std::to_string(i) + " out of range (vars " + std::to_string(*n) + ")");
            if (have_dom[i])
                throw InputError(line_no, "second 'dom' line for variable " + std::to_string(i));
            std::vector<std::pair<Value, double>> entries;
            std::string entry;
            while (line >> entry) {
                auto colon = entry.find(':');
                if (colon == std::string::npos)
                    throw InputError(line_no, "domain entry '" + entry + "' is not value:probability");
                auto v = parse_number<Value>(std::string_view(entry).substr(0, colon), line_no, "value");
                auto p = parse_probability(std::string_view(entry).substr(colon + 1), line_no);
                entries.emplace_back(v, p);
            }
            if (entries.empty())
                throw InputError(line_no, "empty domain for variable " + std::to_string(i));
            std::vector<double> row(entries.size(), -1.0);
            for (auto [v, p] : entries) {
                if (v >= row.size())
                    throw InputError(line_no, "domain values must be 0.." + std::to_string(row.size() - 1));
                if (row[v] != -1.0)
                    throw InputError(line_no, "value " + std::to_string(v) + " listed twice");
                row[v] = p;
            }
            probs[i] = std::move(row);
            have_dom[i] = true;
        }
        else if (keyword == "ev") {
            if (! n)
                throw InputError(line_no, "'ev' before 'vars'");
            for (std::size_t i = 0; i < *n; ++i)
                if (! have_dom[i])
                    throw InputError(line_no, "variable " + std::to_string(i) + " has no 'dom' line");
            std::string rest;
            std::getline(line, rest);
            auto terms = parse_terms(rest, line_no);
            if (terms.empty())
                throw InputError(line_no, "empty event");
            events.emplace_back(std::move(terms));
        }
        else
            throw InputError(line_no, "unknown keyword '" + keyword + "'");
    }

    if (! n)
        throw InputError("missing 'vars' header");
    for (std::size_t i = 0; i < *n; ++i)
        if (! have_dom[i])
            throw InputError("variable " + std::to_string(i) + " has no 'dom' line");

    return Instance(VariableSpace(std::move(probs)), std::move(events));
}

auto read_instance_file(const std::string & path) -> Instance
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open instance file '" + path + "'");
    return read_instance(in);
}

void write_instance(std::ostream & out, const Instance & instance)
{
    auto & space = instance.space();
    auto old_precision = out.precision(17);
    out << "vars " << space.size() << '\n';
    for (VarId i = 0; i < space.size(); ++i) {
        out << "dom " << i;
        for (Value j = 0; j < space.domain_size(i); ++j)
            out << ' ' << j << ':' << space.prob(i, j);
        out << '\n';
    }
    for (auto & e : instance.events()) {
        out << "ev";
        for (auto & t : e.terms())
            out << " (" << t.var << ',' << t.value << ')';
        out << '\n';
    }
    out.precision(old_precision);
}

auto parse_event(const std::string & text) -> BadEvent
{
    auto terms = parse_terms(text, 1);
    if (terms.empty())
        throw InputError("empty event");
    return BadEvent(std::move(terms));
}

}
