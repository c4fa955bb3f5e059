#include "qfclass/forms.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace qfc {

namespace {

constexpr int kMaxReductionSteps = 1 << 20;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 floordiv(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

i128 mod_floor128(i128 a, i128 m)
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

/* x*a + y*b = g with g = gcd(|a|, |b|) >= 0 */
i128 ext_gcd(i128 a, i128 b, i128 & x, i128 & y)
{
    i128 old_r = a, r = b;
    i128 old_s = 1, s = 0;
    i128 old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

i64 narrow(i128 v, char const * what)
{
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw DomainError(std::string("coefficient overflow in ") + what);
    return static_cast<i64>(v);
}

Form make_form(i128 a, i128 b, i128 c, i64 D, char const * what)
{
    Form f;
    f.a = narrow(a, what);
    f.b = narrow(b, what);
    f.c = narrow(c, what);
    f.D = D;
    return f;
}

void require_nonsquare(i64 D)
{
    if (D > 0 && is_perfect_square(D))
        throw DomainError("discriminant " + std::to_string(D) + " is a perfect square");
}

/* r with r = -b (mod 2|c|). Window (sqrt(D) - 2|c|, sqrt(D)) when
 * `window` is set, otherwise (-|c|, |c|]. */
i128 rho_center(i128 b, i128 c, i128 root, bool window)
{
    i128 m = 2 * abs128(c);
    if (window)
        return root - mod_floor128(root + b, m);
    i128 half = abs128(c);
    // r in (-|c|, |c|]
    return half - mod_floor128(half + b, m);
}

Form rho_step(Form const & f, bool fast)
{
    i128 D = f.D;
    i128 root = static_cast<i128>(isqrt(static_cast<u64>(f.D)));
    i128 c = f.c;
    bool window = !fast || c * c < D;
    i128 r = rho_center(f.b, c, root, window);
    i128 num = r * r - D;
    i128 den = 4 * c;
    if (num % den != 0)
        throw std::logic_error("rho: inexact division");
    return make_form(c, r, num / den, f.D, "rho");
}

std::string form_text(Form const & f)
{
    std::ostringstream os;
    os << f;
    return os.str();
}

struct CycleData
{
    std::vector<ClassRep> classes;
    std::vector<std::pair<Form, std::size_t>> members;
};

CycleData partition_cycles(std::vector<Form> forms)
{
    std::sort(forms.begin(), forms.end());
    std::vector<std::size_t> owner(forms.size(), static_cast<std::size_t>(-1));
    std::vector<ClassRep> reps;

    auto find = [&forms](Form const & g) {
        auto it = std::lower_bound(forms.begin(), forms.end(), g);
        if (it == forms.end() || !(*it == g))
            throw std::logic_error("rho left the set of reduced forms at " + form_text(g));
        return static_cast<std::size_t>(it - forms.begin());
    };

    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (owner[i] != static_cast<std::size_t>(-1))
            continue;
        std::size_t id = reps.size();
        ClassRep rep{forms[i], 0};
        std::size_t j = i;
        do {
            if (owner[j] != static_cast<std::size_t>(-1))
                throw std::logic_error("rho is not a permutation on reduced forms");
            owner[j] = id;
            rep.canonical = std::min(rep.canonical, forms[j]);
            ++rep.cycle_length;
            j = find(rho(forms[j]));
        } while (j != i);
        reps.push_back(rep);
    }

    // renumber classes in canonical order
    std::vector<std::size_t> order(reps.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&reps](std::size_t x, std::size_t y) { return reps[x] < reps[y]; });
    std::vector<std::size_t> rank(reps.size());
    CycleData out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        rank[order[i]] = i;
        out.classes.push_back(reps[order[i]]);
    }
    out.members.reserve(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
        out.members.emplace_back(forms[i], rank[owner[i]]);
    return out;
}

} // namespace

Form Form::of(i64 a, i64 b, i64 c)
{
    if (a == 0)
        throw DomainError("form with a = 0");
    i128 D = i128{b} * b - i128{4} * a * c;
    return make_form(a, b, c, narrow(D, "discriminant"), "Form::of");
}

std::ostream & operator<<(std::ostream & os, Form const & f)
{
    return os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
}

bool is_reduced(Form const & f)
{
    if (f.D < 0) {
        i64 ab = f.b < 0 ? -f.b : f.b;
        if (!(ab <= f.a && f.a <= f.c))
            return false;
        if ((ab == f.a || f.a == f.c) && f.b < 0)
            return false;
        return true;
    }
    require_nonsquare(f.D);
    i128 D = f.D;
    i128 b = f.b;
    i128 two_a = 2 * abs128(f.a);
    if (b <= 0 || b * b >= D)
        return false;
    if ((two_a + b) * (two_a + b) <= D)
        return false;
    i128 diff = two_a - b;
    return diff <= 0 || diff * diff < D;
}

Form rho(Form const & f)
{
    if (f.D < 0)
        throw DomainError("rho needs a positive discriminant");
    require_nonsquare(f.D);
    return rho_step(f, false);
}

Form reduce_definite(Form const & f)
{
    if (f.D >= 0 || f.a <= 0)
        throw DomainError("reduce_definite needs a positive definite form");
    i128 a = f.a, b = f.b, c = f.c;
    i128 D = f.D;
    for (int step = 0; step < kMaxReductionSteps; ++step) {
        if (b <= -a || b > a) {
            i128 k = floordiv(a - b, 2 * a);
            b += 2 * a * k;
            c = (b * b - D) / (4 * a);
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && b < 0)
            b = -b;
        return make_form(a, b, c, f.D, "reduce_definite");
    }
    throw std::logic_error("reduce_definite did not terminate");
}

Form reduce_indefinite(Form const & f)
{
    if (f.D < 0)
        throw DomainError("reduce_indefinite needs a positive discriminant");
    require_nonsquare(f.D);
    Form g = f;
    for (int step = 0; step < kMaxReductionSteps; ++step) {
        if (is_reduced(g))
            return g;
        g = rho_step(g, true);
    }
    throw std::logic_error("reduce_indefinite did not terminate");
}

ClassRep reduce(Form const & f)
{
    if (f.D < 0)
        return {reduce_definite(f), 1};
    Form start = reduce_indefinite(f);
    ClassRep rep{start, 0};
    Form g = start;
    do {
        rep.canonical = std::min(rep.canonical, g);
        ++rep.cycle_length;
        g = rho(g);
    } while (!(g == start));
    return rep;
}

std::vector<Form> reduced_forms(Discriminant const & disc)
{
    i64 D = disc.value();
    std::vector<Form> out;
    if (D < 0) {
        i64 absD = -D;
        for (i64 b = (D & 1); 3 * b * b <= absD; b += 2) {
            i64 n = (b * b - D) / 4;
            for (i64 a = std::max<i64>(b, 1); a * a <= n; ++a) {
                if (n % a != 0)
                    continue;
                i64 c = n / a;
                out.push_back(Form{a, b, c, D});
                if (b != 0 && b != a && a != c)
                    out.push_back(Form{a, -b, c, D});
            }
        }
    } else {
        i64 root = static_cast<i64>(isqrt(static_cast<u64>(D)));
        for (i64 b = (D & 1) ? 1 : 2; b <= root; b += 2) {
            i64 n = (D - b * b) / 4;
            i64 lo = std::max<i64>(1, (root - b) / 2);
            i64 hi = (root + b) / 2 + 1;
            for (i64 a = lo; a <= hi; ++a) {
                if (n % a != 0)
                    continue;
                Form f{a, b, -(n / a), D};
                if (!is_reduced(f))
                    continue;
                out.push_back(f);
                out.push_back(Form{-a, b, n / a, D});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ClassRep> enumerate_classes(Discriminant const & disc)
{
    std::vector<Form> forms = reduced_forms(disc);
    if (disc.value() < 0) {
        std::vector<ClassRep> out;
        out.reserve(forms.size());
        for (Form const & f : forms)
            out.push_back({f, 1});
        return out;
    }
    return partition_cycles(std::move(forms)).classes;
}

Form principal_form(Discriminant const & disc)
{
    i64 D = disc.value();
    i64 b0 = (D & 1) ? 1 : 0;
    return Form{1, b0, (b0 * b0 - D) / 4, D};
}

ClassRep principal_class(Discriminant const & disc)
{
    return reduce(principal_form(disc));
}

Form compose_forms(Form const & x, Form const & y)
{
    if (x.D != y.D)
        throw DomainError("compose: discriminants " + std::to_string(x.D) + " and "
                          + std::to_string(y.D) + " differ");
    i128 D = x.D;
    i128 a1 = x.a, b1 = x.b;
    i128 a2 = y.a, b2 = y.b;
    i128 beta = (b1 + b2) / 2;

    i128 s, t, p, q;
    i128 g1 = ext_gcd(a1, a2, s, t);
    i128 e = ext_gcd(g1, beta, p, q);
    i128 u = s * p, v = t * p, w = q;

    i128 num = a1 * b2 * u + a2 * b1 * v + w * ((b1 * b2 + D) / 2);
    if (num % e != 0)
        throw std::logic_error("compose: inexact middle coefficient");
    i128 B = num / e;
    i128 A = (a1 / e) * (a2 / e);
    // shift B into (-|A|, |A|] to keep C small
    i128 absA = abs128(A);
    B = absA - mod_floor128(absA - B, 2 * absA);
    i128 cnum = B * B - D;
    if (cnum % (4 * A) != 0)
        throw std::logic_error("compose: composite is not a form of discriminant "
                               + std::to_string(x.D));
    return make_form(A, B, cnum / (4 * A), x.D, "compose");
}

ClassRep compose(ClassRep const & x, ClassRep const & y)
{
    return reduce(compose_forms(x.canonical, y.canonical));
}

ClassRep inverse(ClassRep const & x)
{
    Form const & f = x.canonical;
    return reduce(Form{f.a, -f.b, f.c, f.D});
}

ClassGroup::ClassGroup(Discriminant const & D) : disc_(D)
{
    if (D.value() < 0) {
        classes_ = enumerate_classes(D);
    } else {
        CycleData data = partition_cycles(reduced_forms(D));
        classes_ = std::move(data.classes);
        members_ = std::move(data.members);
    }
    identity_ = index_of(principal_form(D));
}

std::size_t ClassGroup::index_of(Form const & f) const
{
    if (f.D != disc_.value())
        throw DomainError("form " + form_text(f) + " has discriminant "
                          + std::to_string(f.D) + ", group has "
                          + std::to_string(disc_.value()));
    if (f.D < 0) {
        Form g = reduce_definite(f);
        auto it = std::lower_bound(classes_.begin(), classes_.end(), ClassRep{g, 1});
        if (it == classes_.end() || !(it->canonical == g))
            throw std::logic_error("reduced form " + form_text(g) + " not enumerated");
        return static_cast<std::size_t>(it - classes_.begin());
    }
    Form g = reduce_indefinite(f);
    auto it = std::lower_bound(members_.begin(), members_.end(), g,
                               [](auto const & m, Form const & key) { return m.first < key; });
    if (it == members_.end() || !(it->first == g))
        throw std::logic_error("reduced form " + form_text(g) + " not enumerated");
    return it->second;
}

std::size_t ClassGroup::multiply(std::size_t i, std::size_t j) const
{
    return index_of(compose_forms(classes_[i].canonical, classes_[j].canonical));
}

i64 three_torsion_count(ClassGroup const & G)
{
    i64 count = 0;
    for (std::size_t i = 0; i < G.order(); ++i) {
        if (G.multiply(G.multiply(i, i), i) == G.identity())
            ++count;
    }
    return count;
}

i64 three_torsion_count(Discriminant const & D)
{
    return three_torsion_count(ClassGroup(D));
}

UnitNorm unit_norm(Discriminant const & disc)
{
    i64 D = disc.value();
    if (D < 0)
        throw DomainError("unit_norm needs a positive discriminant");
    // omega = (P + sqrt(d)) / Q
    i64 d, P, Q;
    if (D % 4 == 0) {
        d = D / 4;
        P = 0;
        Q = 1;
    } else {
        d = D;
        P = 1;
        Q = 2;
    }
    i64 root = static_cast<i64>(isqrt(static_cast<u64>(d)));
    auto step = [&](i64 & p, i64 & q) {
        i64 a = (p + root) / q;
        p = a * q - p;
        q = (d - p * p) / q;
    };
    // the first complete quotient is reduced, so the expansion is purely
    // periodic from there on
    step(P, Q);
    i64 const P1 = P, Q1 = Q;
    i64 period = 0;
    do {
        step(P, Q);
        ++period;
        if (period > (i64{1} << 40))
            throw std::logic_error("unit_norm: period detection did not terminate");
    } while (P != P1 || Q != Q1);
    return (period & 1) ? UnitNorm::minus_one : UnitNorm::plus_one;
}

ClassGroupInfo class_group_info(Discriminant const & D)
{
    ClassGroup G(D);
    ClassGroupInfo info{D};
    info.h_plus = static_cast<i64>(G.order());
    info.three_torsion_count = three_torsion_count(G);

    i64 t = info.three_torsion_count;
    int r3 = 0;
    while (t % 3 == 0) {
        t /= 3;
        ++r3;
    }
    if (t != 1)
        throw std::logic_error("3-torsion count " + std::to_string(info.three_torsion_count)
                               + " of D = " + std::to_string(D.value())
                               + " is not a power of 3");
    info.r3 = r3;

    if (D.is_real()) {
        info.unit_norm = unit_norm(D);
        if (info.unit_norm == UnitNorm::plus_one) {
            if (info.h_plus % 2 != 0)
                throw std::logic_error("unit norm +1 with odd narrow class number at D = "
                                       + std::to_string(D.value()));
            info.h = info.h_plus / 2;
        } else {
            info.h = info.h_plus;
        }
    } else {
        info.unit_norm = UnitNorm::not_applicable;
        info.h = info.h_plus;
    }
    if ((info.h % 3 == 0) != (info.h_plus % 3 == 0) || (info.h % 3 == 0) != (info.r3 > 0))
        throw std::logic_error("3-divisibility of h, h+ and r3 disagree at D = "
                               + std::to_string(D.value()));
    return info;
}

i64 analytic_h_imaginary(Discriminant const & disc)
{
    i64 D = disc.value();
    if (D >= 0)
        throw DomainError("analytic_h_imaginary needs a negative discriminant");
    i64 absD = -D;
    i64 w = D == -3 ? 6 : D == -4 ? 4 : 2;
    i128 sum = 0;
    for (i64 a = 1; a < absD; ++a)
        sum += i128{kronecker(D, a)} * a;
    i128 num = w * abs128(sum);
    i128 den = 2 * i128{absD};
    if (num % den != 0)
        throw std::logic_error("analytic class number: inexact division at D = "
                               + std::to_string(D));
    return static_cast<i64>(num / den);
}

} // namespace qfc
