#include "bcp/instance.hpp"

#include <random>
#include <set>

#include "bcp/errors.hpp"
#include "json.hpp"

namespace bcp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr long kBox = 1024;  // coordinate half-width

Rational rand_rat(std::mt19937_64& rng, long lo, long hi, long den = 16) {
    long span = (hi - lo) * den;
    long num = lo * den + static_cast<long>(rng() % static_cast<unsigned long>(span + 1));
    return make_rational(num, den);
}

std::vector<Point2> uniform_points(std::mt19937_64& rng, int m) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        pts.push_back({rand_rat(rng, -kBox, kBox), rand_rat(rng, -kBox, kBox), i});
    return pts;
}

// disk radius^2 scaled so a constant expected number of points falls inside
Rational scaled_r2(std::mt19937_64& rng, int n) {
    long scale = std::max(1L, static_cast<long>(n));
    long num = 4 * kBox * kBox * (16 + static_cast<long>(rng() % 48));
    return make_rational(num, 32 * scale);
}

BoolShape conj_of(int a, int b) {
    BoolShape s;
    s.op = BoolShape::Op::conj;
    s.children = {BoolShape::leaf_of(a), BoolShape::leaf_of(b)};
    return s;
}

}  // namespace

InstanceSpec generate_instance(const std::string& kind, int m, int n, uint64_t seed) {
    if (m < 0 || n < 0) throw InvalidInput("generate_instance: m, n must be >= 0");
    InstanceSpec inst;
    inst.seed = seed;
    inst.generator = kind;
    std::mt19937_64 rng(seed ^ 0x5eedb1c5u);
    std::set<std::string> used;  // dedupe ranges by parameter signature
    auto fresh = [&](const std::vector<Rational>& params) {
        std::string key;
        for (const auto& q : params) key += rational_to_string(q) + "|";
        return used.insert(key).second;
    };

    if (kind == "clustered") {
        int clusters = std::max(1, m / 50);
        std::vector<std::pair<Rational, Rational>> centers;
        for (int c = 0; c < clusters; ++c)
            centers.emplace_back(rand_rat(rng, -kBox, kBox), rand_rat(rng, -kBox, kBox));
        for (int i = 0; i < m; ++i) {
            auto& c = centers[static_cast<size_t>(rng() % centers.size())];
            inst.points.push_back({c.first + rand_rat(rng, -kBox / 20, kBox / 20),
                                   c.second + rand_rat(rng, -kBox / 20, kBox / 20), i});
        }
        for (int i = 0; i < n; ++i) {
            for (int tries = 0; tries < 64; ++tries) {
                auto& c = centers[static_cast<size_t>(rng() % centers.size())];
                Rational cx = c.first + rand_rat(rng, -kBox / 20, kBox / 20);
                Rational cy = c.second + rand_rat(rng, -kBox / 20, kBox / 20);
                Rational r2 = make_rational(kBox * kBox * (8 + static_cast<long>(rng() % 24)),
                                            160 * std::max(1, n));
                if (!fresh({cx, cy, r2})) continue;
                inst.ranges.push_back(make_disk(i, cx, cy, r2));
                break;
            }
        }
        return inst;
    }

    inst.points = uniform_points(rng, m);
    for (int i = 0; i < n; ++i) {
        for (int tries = 0; tries < 64; ++tries) {
            if (kind == "uniform-disks") {
                Rational cx = rand_rat(rng, -kBox, kBox), cy = rand_rat(rng, -kBox, kBox);
                Rational r2 = scaled_r2(rng, n);
                if (!fresh({cx, cy, r2})) continue;
                inst.ranges.push_back(make_disk(i, cx, cy, r2));
            } else if (kind == "uniform-halfplanes") {
                Rational a = rand_rat(rng, -4, 4), b = rand_rat(rng, -kBox, kBox);
                if (!fresh({a, b})) continue;
                inst.ranges.push_back(make_halfplane(i, a, b));
            } else if (kind == "annuli") {
                Rational cx = rand_rat(rng, -kBox, kBox), cy = rand_rat(rng, -kBox, kBox);
                Rational R2 = scaled_r2(rng, n);
                Rational r2 = R2 * make_rational(1 + static_cast<long>(rng() % 8), 16);
                if (!fresh({cx, cy, r2, R2})) continue;
                inst.ranges.push_back(make_annulus(i, cx, cy, r2, R2));
            } else if (kind == "parabolic") {
                Rational a = rand_rat(rng, -2, 2, 64);
                Rational b = rand_rat(rng, -4, 4);
                Rational c = rand_rat(rng, -kBox, kBox);
                if (!fresh({a, b, c})) continue;
                inst.ranges.push_back(make_parabolic(i, a, b, c));
            } else if (kind == "adversarial-lenses") {
                // circles in two-crossing pairs to stress the pseudo-segment cutter
                Rational r2 = make_rational(kBox * kBox, 100);
                Rational cx, cy;
                if (i % 2 == 0 || inst.ranges.empty()) {
                    cx = rand_rat(rng, -kBox, kBox);
                    cy = rand_rat(rng, -kBox, kBox);
                } else {
                    const auto& prev = inst.ranges.back().params;
                    cx = prev[0] + make_rational(kBox, 10 + static_cast<long>(rng() % 10));
                    cy = prev[1] + make_rational(static_cast<long>(rng() % 32) - 16, 16);
                }
                if (!fresh({cx, cy, r2})) continue;
                inst.ranges.push_back(make_disk(i, cx, cy, r2));
            } else if (kind == "boolean-mix") {
                Rational cx = rand_rat(rng, -kBox, kBox), cy = rand_rat(rng, -kBox, kBox);
                Rational R2 = scaled_r2(rng, std::max(1, n / 2));
                bool crescent = (seed % 2 == 0);
                if (crescent) {
                    // big disk minus an offset smaller disk
                    Rational dx = rand_rat(rng, -kBox / 40, kBox / 40);
                    Rational dy = rand_rat(rng, -kBox / 40, kBox / 40);
                    Rational r2 = R2 * make_rational(1 + static_cast<long>(rng() % 6), 12);
                    std::vector<Rational> params{cx, cy, R2, cx + dx, cy + dy, r2};
                    if (!fresh(params)) continue;
                    BoolShape neg;
                    neg.op = BoolShape::Op::neg;
                    neg.children = {BoolShape::leaf_of(1)};
                    BoolShape shape;
                    shape.op = BoolShape::Op::conj;
                    shape.children = {BoolShape::leaf_of(0), neg};
                    inst.ranges.push_back(make_custom(
                        i, params,
                        {{AtomKind::disk, {0, 1, 2}, false}, {AtomKind::disk, {3, 4, 5}, false}},
                        shape));
                } else {
                    // union of two nearby disks
                    Rational dx = rand_rat(rng, -kBox / 20, kBox / 20);
                    Rational dy = rand_rat(rng, -kBox / 20, kBox / 20);
                    Rational r2b = scaled_r2(rng, std::max(1, n / 2));
                    std::vector<Rational> params{cx, cy, R2, cx + dx, cy + dy, r2b};
                    if (!fresh(params)) continue;
                    BoolShape shape;
                    shape.op = BoolShape::Op::disj;
                    shape.children = {BoolShape::leaf_of(0), BoolShape::leaf_of(1)};
                    inst.ranges.push_back(make_custom(
                        i, params,
                        {{AtomKind::disk, {0, 1, 2}, false}, {AtomKind::disk, {3, 4, 5}, false}},
                        shape));
                }
            } else {
                throw InvalidInput("unknown generator kind '" + kind + "'");
            }
            break;
        }
    }
    if (static_cast<int>(inst.ranges.size()) != n)
        throw InvariantViolation("generator failed to produce distinct ranges");
    return inst;
}

namespace {

ordered_json rational_json(const Rational& q) {
    if (q.get_den() == 1 && mpz_fits_slong_p(q.get_num().get_mpz_t()))
        return ordered_json(q.get_num().get_si());
    return ordered_json(rational_to_string(q));
}

Rational rational_from_json(const ordered_json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InvalidInput("rational must be an integer or 'num/den' string");
}

ordered_json shape_json(const BoolShape& s) {
    switch (s.op) {
        case BoolShape::Op::leaf: return ordered_json(s.atom);
        case BoolShape::Op::neg: {
            ordered_json arr = ordered_json::array();
            arr.push_back("not");
            arr.push_back(shape_json(s.children[0]));
            return arr;
        }
        case BoolShape::Op::conj:
        case BoolShape::Op::disj: {
            ordered_json arr = ordered_json::array();
            arr.push_back(s.op == BoolShape::Op::conj ? "and" : "or");
            for (const auto& c : s.children) arr.push_back(shape_json(c));
            return arr;
        }
    }
    return ordered_json();
}

BoolShape shape_from_json(const ordered_json& j) {
    if (j.is_number_integer()) return BoolShape::leaf_of(j.get<int>());
    if (!j.is_array() || j.empty() || !j[0].is_string())
        throw InvalidInput("shape must be an atom index or [op, ...]");
    std::string op = j[0].get<std::string>();
    BoolShape s;
    if (op == "not") {
        if (j.size() != 2) throw InvalidInput("'not' takes one operand");
        s.op = BoolShape::Op::neg;
        s.children = {shape_from_json(j[1])};
        return s;
    }
    s.op = (op == "and") ? BoolShape::Op::conj
                         : (op == "or" ? BoolShape::Op::disj
                                       : throw InvalidInput("unknown shape op '" + op + "'"));
    for (size_t i = 1; i < j.size(); ++i) s.children.push_back(shape_from_json(j[i]));
    return s;
}

std::string atom_kind_name(AtomKind k) {
    switch (k) {
        case AtomKind::halfplane: return "halfplane";
        case AtomKind::disk: return "disk";
        case AtomKind::parabola: return "parabola";
    }
    return "?";
}

AtomKind atom_kind_from(const std::string& s) {
    if (s == "halfplane") return AtomKind::halfplane;
    if (s == "disk") return AtomKind::disk;
    if (s == "parabola") return AtomKind::parabola;
    throw InvalidInput("unknown atom kind '" + s + "'");
}

}  // namespace

std::string instance_to_json(const InstanceSpec& inst) {
    ordered_json j;
    j["points"] = ordered_json::array();
    for (const auto& p : inst.points) {
        ordered_json pt = ordered_json::array();
        pt.push_back(rational_json(p.x));
        pt.push_back(rational_json(p.y));
        j["points"].push_back(pt);
    }
    j["ranges"] = ordered_json::array();
    for (const auto& r : inst.ranges) {
        ordered_json jr;
        jr["family"] = family_name(r.family);
        jr["params"] = ordered_json::array();
        for (const auto& q : r.params) jr["params"].push_back(rational_json(q));
        if (r.family == Family::custom) {
            jr["atoms"] = ordered_json::array();
            for (const auto& t : r.templates) {
                ordered_json ja;
                ja["kind"] = atom_kind_name(t.kind);
                ja["params"] = t.param_idx;
                ja["negate"] = t.negate;
                jr["atoms"].push_back(ja);
            }
            jr["shape"] = shape_json(r.shape);
        }
        j["ranges"].push_back(jr);
    }
    j["seed"] = inst.seed;
    j["generator"] = inst.generator;
    return j.dump(2) + "\n";
}

InstanceSpec instance_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("instance JSON parse error: ") + e.what());
    }
    InstanceSpec inst;
    inst.seed = j.value("seed", 0ULL);
    inst.generator = j.value("generator", std::string());
    int pid = 0;
    for (const auto& pt : j.at("points")) {
        if (!pt.is_array() || pt.size() != 2) throw InvalidInput("point must be [x, y]");
        inst.points.push_back({rational_from_json(pt[0]), rational_from_json(pt[1]), pid++});
    }
    int rid = 0;
    for (const auto& jr : j.at("ranges")) {
        Family fam = family_from_name(jr.at("family").get<std::string>());
        std::vector<Rational> params;
        for (const auto& q : jr.at("params")) params.push_back(rational_from_json(q));
        switch (fam) {
            case Family::halfplane:
                if (params.size() != 2) throw InvalidInput("halfplane takes 2 params");
                inst.ranges.push_back(make_halfplane(rid, params[0], params[1]));
                break;
            case Family::disk:
                if (params.size() != 3) throw InvalidInput("disk takes 3 params");
                inst.ranges.push_back(make_disk(rid, params[0], params[1], params[2]));
                break;
            case Family::parabolic:
                if (params.size() != 3) throw InvalidInput("parabolic takes 3 params");
                inst.ranges.push_back(make_parabolic(rid, params[0], params[1], params[2]));
                break;
            case Family::annulus:
                if (params.size() != 4) throw InvalidInput("annulus takes 4 params");
                inst.ranges.push_back(
                    make_annulus(rid, params[0], params[1], params[2], params[3]));
                break;
            case Family::custom: {
                std::vector<AtomTemplate> templates;
                for (const auto& ja : jr.at("atoms")) {
                    AtomTemplate t;
                    t.kind = atom_kind_from(ja.at("kind").get<std::string>());
                    t.param_idx = ja.at("params").get<std::vector<int>>();
                    t.negate = ja.value("negate", false);
                    templates.push_back(std::move(t));
                }
                inst.ranges.push_back(make_custom(rid, params, std::move(templates),
                                                  shape_from_json(jr.at("shape"))));
                break;
            }
        }
        ++rid;
    }
    return inst;
}

}  // namespace bcp
