#include "sppolar/construction.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sppolar {

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string format_mu(std::size_t mu) { return mu == kExactAlphabet ? "exact" : std::to_string(mu); }

std::size_t parse_mu(const std::string& s)
{
    if (s == "exact")
        return kExactAlphabet;
    return std::stoul(s);
}

[[noreturn]] void malformed(const std::string& what) { throw std::runtime_error("malformed code spec: " + what); }

}  // namespace

void write_code_spec(std::ostream& out, const CodeSpec& spec)
{
    out << "# sppolar code specification\n";
    out << "M " << spec.pattern.length << '\n';
    out << "N " << spec.pattern.mother << '\n';
    out << "mode " << to_string(spec.pattern.mode) << '\n';
    out << "channel " << spec.channel << '\n';
    out << "p0 " << format_number(spec.p0) << '\n';
    out << "mu " << format_mu(spec.mu) << '\n';
    out << "info " << spec.info_size() << '\n';
    out << "# index Z K H frozen\n";
    for (std::size_t i = 0; i < spec.profile.size(); ++i) {
        const Metrics& r = spec.profile[i];
        out << i << ' ' << format_number(r.z) << ' ' << format_number(r.k) << ' ' << format_number(r.h) << ' '
            << (spec.is_frozen(i) ? 1 : 0) << '\n';
    }
}

CodeSpec read_code_spec(std::istream& in)
{
    CodeSpec spec;
    std::size_t m = 0, n = 0, info = 0;
    bool have_m = false, have_mode = false, have_info = false;
    RateMatching mode = RateMatching::shortened;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty())
            continue;
        if (key == "M") {
            ls >> m;
            have_m = true;
        } else if (key == "N") {
            ls >> n;
        } else if (key == "mode") {
            std::string s;
            ls >> s;
            mode = rate_matching_from_string(s);
            have_mode = true;
        } else if (key == "channel") {
            ls >> spec.channel;
        } else if (key == "p0") {
            ls >> spec.p0;
        } else if (key == "mu") {
            std::string s;
            ls >> s;
            spec.mu = parse_mu(s);
        } else if (key == "info") {
            ls >> info;
            have_info = true;
        } else {
            std::size_t index = std::stoul(key);
            Metrics r;
            int frozen = -1;
            if (!(ls >> r.z >> r.k >> r.h >> frozen) || (frozen != 0 && frozen != 1))
                malformed("bad row '" + line + "'");
            if (index != spec.profile.size())
                malformed("rows out of order");
            spec.profile.push_back(r);
            if (frozen == 1)
                spec.frozen.push_back(index);
        }
        if (ls.fail())
            malformed("bad line '" + line + "'");
    }
    if (!have_m || !have_mode || !have_info || spec.channel.empty())
        malformed("missing header field");
    spec.pattern = make_pattern(m, mode);
    if (n != 0 && n != spec.pattern.mother)
        malformed("N does not match M");
    if (spec.profile.size() != m)
        malformed("expected one row per index");
    if (spec.info_size() != info)
        malformed("info count does not match the frozen flags");
    return spec;
}

}  // namespace sppolar
