#ifndef QFCLASS_FORMS_HPP
#define QFCLASS_FORMS_HPP

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "qfclass/arith.hpp"

namespace qfc {

/* Largest |D| for which all form arithmetic below stays within 128-bit
 * intermediates and 64-bit stored coefficients. */
inline constexpr i64 kMaxDiscriminantMagnitude = i64{1} << 48;

/*
 * Binary quadratic form a x^2 + b xy + c y^2 with cached discriminant
 * D = b^2 - 4ac. Ordering is lexicographic on (a, b, c).
 */
struct Form
{
    i64 a = 1;
    i64 b = 0;
    i64 c = 0;
    i64 D = 0;

    /* Throws DomainError if a == 0 or the discriminant overflows. */
    static Form of(i64 a, i64 b, i64 c);

    friend bool operator==(Form const & x, Form const & y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    friend std::strong_ordering operator<=>(Form const & x, Form const & y)
    {
        if (auto o = x.a <=> y.a; o != 0)
            return o;
        if (auto o = x.b <=> y.b; o != 0)
            return o;
        return x.c <=> y.c;
    }
};

std::ostream & operator<<(std::ostream & os, Form const & f);

/*
 * A form class. For D < 0 the canonical form is the unique reduced form
 * and cycle_length is 1. For D > 0 it is the lexicographically least
 * member of the rho-cycle of reduced forms, and cycle_length the size of
 * that cycle.
 */
struct ClassRep
{
    Form canonical;
    i64 cycle_length = 1;

    friend bool operator==(ClassRep const & x, ClassRep const & y)
    {
        return x.canonical == y.canonical;
    }
    friend std::strong_ordering operator<=>(ClassRep const & x, ClassRep const & y)
    {
        return x.canonical <=> y.canonical;
    }
};

enum class UnitNorm : int { minus_one = -1, not_applicable = 0, plus_one = 1 };

struct ClassGroupInfo
{
    Discriminant D;
    i64 h_plus = 1;
    i64 h = 1;
    UnitNorm unit_norm = UnitNorm::not_applicable;
    i64 three_torsion_count = 1;
    int r3 = 0;

    friend bool operator==(ClassGroupInfo const &, ClassGroupInfo const &) = default;
};

bool is_reduced(Form const & f);

/* One step of indefinite reduction: (a, b, c) -> (c, r, (r^2 - D)/4c) with
 * r = -b (mod 2|c|) and sqrt(D) - 2|c| < r < sqrt(D). */
Form rho(Form const & f);

/* Reduced representative of a definite form (a > 0). */
Form reduce_definite(Form const & f);

/* Apply rho until the form is reduced. */
Form reduce_indefinite(Form const & f);

ClassRep reduce(Form const & f);

std::vector<Form> reduced_forms(Discriminant const & D);

std::vector<ClassRep> enumerate_classes(Discriminant const & D);

Form principal_form(Discriminant const & D);
ClassRep principal_class(Discriminant const & D);

/* Dirichlet composite of two forms of the same discriminant, not reduced. */
Form compose_forms(Form const & x, Form const & y);

ClassRep compose(ClassRep const & x, ClassRep const & y);

ClassRep inverse(ClassRep const & x);

/*
 * Multiplication-ready view of the (narrow) form class group. Reduced
 * forms are indexed so a product only needs a short reduction and a
 * lookup instead of a full cycle walk.
 */
class ClassGroup
{
  public:
    explicit ClassGroup(Discriminant const & D);

    Discriminant const & discriminant() const { return disc_; }
    std::size_t order() const { return classes_.size(); }
    std::vector<ClassRep> const & classes() const { return classes_; }
    std::size_t identity() const { return identity_; }

    std::size_t index_of(Form const & f) const;
    std::size_t multiply(std::size_t i, std::size_t j) const;

  private:
    Discriminant disc_;
    std::vector<ClassRep> classes_;
    /* reduced form -> class index, sorted by form (real case only) */
    std::vector<std::pair<Form, std::size_t>> members_;
    std::size_t identity_ = 0;
};

i64 three_torsion_count(Discriminant const & D);
i64 three_torsion_count(ClassGroup const & G);

/* Norm of the fundamental unit from the parity of the continued fraction
 * period of omega. Throws DomainError for D < 0. */
UnitNorm unit_norm(Discriminant const & D);

ClassGroupInfo class_group_info(Discriminant const & D);

/* Class number from the finite character sum
 * h = w/(2|D|) * |sum_{a=1}^{|D|-1} (D/a) a|. */
i64 analytic_h_imaginary(Discriminant const & D);

} // namespace qfc

#endif
