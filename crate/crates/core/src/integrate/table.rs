//! Appendix coefficient table, `t0 = 0` column, one entry per word over
//! `{0, 1, 2}` of length 1 to 4.
//!
//! Letter 0 is the drift `((a − b·k)·y, 0)`, letter 1 the field `(−b·y, 0)`
//! driven by `√ω·sin ωt` and letter 2 the field `(0, y²)` driven by
//! `√ω·cos ωt`. For a word `w = i0 i1 … id` the Lie coefficient is
//! `L_{f_id} ⋯ L_{f_i0} x` and the integral is the iterated integral over one
//! dither period with `u_{i0}` outermost.

/// Lie-derivative coefficient `c·b^p_b·y^p_y·(a − b·k)^p_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LieCoeff {
    pub c: i64,
    pub p_b: u32,
    pub p_y: u32,
    pub p_r: u32,
}

/// Integral monomial `(num/den)·T^{twice_p_t/2}·(2π)^{twice_p_2pi/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralCoeff {
    pub num: i64,
    pub den: i64,
    pub twice_p_t: i32,
    pub twice_p_2pi: i32,
}

/// How a row enters the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowMark {
    Contributes,
    /// Nonzero Lie coefficient, vanishing integral.
    IntegralZero,
    /// Vanishing Lie coefficient (or a row the table skips).
    LieZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub word: &'static str,
    pub lie_y: Option<LieCoeff>,
    pub lie_k: Option<LieCoeff>,
    pub integral: &'static [IntegralCoeff],
    pub mark: RowMark,
}

const fn lie(c: i64, p_b: u32, p_y: u32, p_r: u32) -> LieCoeff {
    LieCoeff { c, p_b, p_y, p_r }
}

const fn im(num: i64, den: i64, twice_p_t: i32, twice_p_2pi: i32) -> IntegralCoeff {
    IntegralCoeff {
        num,
        den,
        twice_p_t,
        twice_p_2pi,
    }
}

const fn row(
    word: &'static str,
    lie_y: Option<LieCoeff>,
    lie_k: Option<LieCoeff>,
    integral: &'static [IntegralCoeff],
    mark: RowMark,
) -> TableRow {
    TableRow {
        word,
        lie_y,
        lie_k,
        integral,
        mark,
    }
}

/// The table as printed, including its typos.
pub fn published_rows() -> &'static [TableRow] {
    PUBLISHED
}

/// Rows whose printed integral disagrees with the iterated integral it
/// stands for, with the recomputed value.
pub fn table_errata() -> &'static [(&'static str, &'static [IntegralCoeff])] {
    ERRATA
}

#[rustfmt::skip]
static PUBLISHED: &[TableRow] = &[
    row("0", Some(lie(1, 0, 1, 1)), None, &[im(1, 1, 2, 0)], RowMark::Contributes),
    row("1", Some(lie(-1, 1, 1, 0)), None, &[], RowMark::IntegralZero),
    row("2", None, Some(lie(1, 0, 2, 0)), &[], RowMark::IntegralZero),
    row("00", Some(lie(1, 0, 1, 2)), None, &[im(1, 2, 4, 0)], RowMark::Contributes),
    row("01", Some(lie(-1, 1, 1, 1)), None, &[im(1, 1, 3, -1)], RowMark::Contributes),
    row("02", Some(lie(-1, 1, 3, 0)), None, &[], RowMark::IntegralZero),
    row("10", Some(lie(-1, 1, 1, 1)), None, &[im(-1, 1, 3, -1)], RowMark::Contributes),
    row("11", Some(lie(1, 2, 1, 0)), None, &[], RowMark::IntegralZero),
    row("12", None, None, &[im(1, 2, 2, 0)], RowMark::LieZero),
    row("20", None, Some(lie(2, 0, 2, 1)), &[], RowMark::IntegralZero),
    row("21", None, Some(lie(-2, 1, 2, 0)), &[im(-1, 2, 2, 0)], RowMark::Contributes),
    row("22", None, None, &[], RowMark::LieZero),
    row("000", Some(lie(1, 0, 1, 3)), None, &[im(1, 6, 6, 0)], RowMark::Contributes),
    row("001", Some(lie(-1, 1, 1, 2)), None, &[im(1, 2, 5, -1)], RowMark::Contributes),
    row("002", Some(lie(-2, 1, 3, 1)), None, &[im(1, 1, 5, -3)], RowMark::Contributes),
    row("010", Some(lie(-1, 1, 1, 2)), None, &[], RowMark::IntegralZero),
    row("011", Some(lie(1, 2, 1, 1)), None, &[im(3, 4, 4, -2)], RowMark::Contributes),
    row("012", Some(lie(1, 2, 3, 0)), None, &[im(1, 4, 4, 0)], RowMark::Contributes),
    row("020", Some(lie(-3, 1, 3, 1)), None, &[im(-2, 1, 5, -3)], RowMark::Contributes),
    row("021", Some(lie(3, 2, 3, 0)), None, &[im(-1, 4, 4, 0)], RowMark::Contributes),
    row("022", None, None, &[], RowMark::LieZero),
    row("100", Some(lie(-1, 1, 1, 2)), None, &[im(-1, 1, 5, -3)], RowMark::Contributes),
    row("101", Some(lie(1, 2, 1, 1)), None, &[im(-3, 2, 4, -2)], RowMark::Contributes),
    row("102", Some(lie(1, 2, 3, 0)), None, &[im(1, 1, 4, -4)], RowMark::Contributes),
    row("110", Some(lie(1, 2, 1, 1)), None, &[im(3, 4, 4, -2)], RowMark::Contributes),
    row("111", Some(lie(-1, 3, 1, 0)), None, &[], RowMark::IntegralZero),
    row("112", None, None, &[], RowMark::LieZero),
    row("120", None, None, &[], RowMark::LieZero),
    row("121", None, None, &[], RowMark::LieZero),
    row("122", None, None, &[], RowMark::LieZero),
    row("200", None, Some(lie(4, 0, 2, 2)), &[im(1, 1, 5, -3)], RowMark::Contributes),
    row("201", None, Some(lie(-4, 1, 2, 1)), &[], RowMark::IntegralZero),
    row("202", None, Some(lie(-2, 1, 4, 0)), &[im(-1, 2, 4, -2)], RowMark::Contributes),
    row("210", None, Some(lie(-4, 1, 2, 1)), &[im(1, 4, 4, 0)], RowMark::Contributes),
    row("211", None, Some(lie(4, 2, 2, 0)), &[im(-1, 2, 3, -1)], RowMark::Contributes),
    row("212", None, None, &[], RowMark::LieZero),
    row("220", None, None, &[], RowMark::LieZero),
    row("221", None, None, &[], RowMark::LieZero),
    row("222", None, None, &[], RowMark::LieZero),
    row("0000", Some(lie(1, 0, 1, 4)), None, &[im(1, 24, 8, 0)], RowMark::Contributes),
    row("0001", Some(lie(-1, 1, 1, 3)), None, &[im(-1, 1, 7, -5), im(1, 6, 7, -1)], RowMark::Contributes),
    row("0002", Some(lie(-3, 1, 3, 2)), None, &[im(1, 2, 7, -3)], RowMark::Contributes),
    row("0010", Some(lie(-1, 1, 1, 3)), None, &[im(3, 1, 7, -5)], RowMark::Contributes),
    row("0011", Some(lie(1, 2, 1, 2)), None, &[im(3, 8, 6, -2)], RowMark::Contributes),
    row("0012", Some(lie(2, 2, 3, 1)), None, &[im(-1, 8, 6, -4), im(1, 12, 6, 0)], RowMark::Contributes),
    row("0020", Some(lie(-6, 1, 3, 2)), None, &[im(-1, 2, 7, -3)], RowMark::Contributes),
    row("0021", Some(lie(6, 2, 3, 1)), None, &[im(7, 8, 6, -4), im(1, 12, 6, 0)], RowMark::Contributes),
    row("0022", Some(lie(2, 2, 5, 0)), None, &[], RowMark::IntegralZero),
    row("0100", Some(lie(-1, 1, 1, 3)), None, &[im(-3, 1, 7, -5)], RowMark::Contributes),
    row("0101", Some(lie(1, 2, 1, 2)), None, &[im(-1, 4, 6, -2)], RowMark::Contributes),
    row("0102", Some(lie(2, 2, 3, 1)), None, &[im(3, 4, 6, -4)], RowMark::Contributes),
    row("0110", Some(lie(1, 2, 1, 2)), None, &[im(1, 4, 6, -2)], RowMark::Contributes),
    row("0111", Some(lie(-1, 3, 1, 1)), None, &[im(5, 12, 5, -3)], RowMark::Contributes),
    row("0112", Some(lie(-1, 3, 3, 0)), None, &[im(5, 4, 5, 5)], RowMark::Contributes),
    row("0120", Some(lie(3, 2, 3, 1)), None, &[im(-1, 2, 6, -4), im(1, 12, 6, 0)], RowMark::Contributes),
    row("0121", Some(lie(-3, 3, 3, 0)), None, &[im(1, 4, 5, -1)], RowMark::Contributes),
    row("0122", None, None, &[], RowMark::LieZero),
    row("0200", Some(lie(-9, 1, 3, 2)), None, &[im(-1, 2, 7, -3)], RowMark::Contributes),
    row("0201", Some(lie(9, 2, 3, 1)), None, &[im(-9, 4, 6, -4)], RowMark::Contributes),
    row("0202", Some(lie(3, 2, 5, 0)), None, &[im(-1, 4, 6, -2)], RowMark::Contributes),
    row("0210", Some(lie(9, 2, 3, 1)), None, &[im(1, 2, 6, -4), im(-1, 12, 6, 0)], RowMark::Contributes),
    row("0211", Some(lie(-9, 3, 3, 0)), None, &[im(-1, 4, 5, -1)], RowMark::Contributes),
    row("0212", None, None, &[], RowMark::LieZero),
    row("0220", None, None, &[], RowMark::LieZero),
    row("0221", None, None, &[], RowMark::LieZero),
    row("0222", None, None, &[], RowMark::LieZero),
    row("1000", Some(lie(-1, 1, 1, 3)), None, &[im(1, 1, 7, -5), im(-1, 6, 7, -1)], RowMark::Contributes),
    row("1001", Some(lie(1, 2, 1, 2)), None, &[im(-1, 2, 6, -2)], RowMark::Contributes),
    row("1002", Some(lie(2, 2, 3, 1)), None, &[im(-3, 2, 6, -4)], RowMark::Contributes),
    row("1010", Some(lie(1, 2, 1, 2)), None, &[im(-1, 4, 6, -2)], RowMark::Contributes),
    row("1011", Some(lie(-1, 3, 1, 1)), None, &[im(-5, 4, 5, -3)], RowMark::Contributes),
    row("1012", Some(lie(-1, 3, 3, 0)), None, &[im(-1, 4, 5, -1)], RowMark::Contributes),
    row("1020", Some(lie(3, 2, 3, 1)), None, &[im(9, 4, 6, -4)], RowMark::Contributes),
    row("1021", Some(lie(-3, 3, 3, 0)), None, &[im(1, 4, 5, -1)], RowMark::Contributes),
    row("1022", None, None, &[], RowMark::LieZero),
    row("1100", Some(lie(1, 2, 1, 2)), None, &[im(3, 8, 6, -2)], RowMark::Contributes),
    row("1101", Some(lie(-1, 3, 1, 1)), None, &[im(5, 4, 5, -3)], RowMark::Contributes),
    row("1102", Some(lie(-1, 3, 3, 0)), None, &[im(-13, 6, 5, -5)], RowMark::Contributes),
    row("1110", Some(lie(-1, 3, 1, 1)), None, &[im(-5, 12, 5, -3)], RowMark::Contributes),
    row("1111", Some(lie(1, 4, 1, 0)), None, &[], RowMark::IntegralZero),
    row("1112", None, None, &[], RowMark::LieZero),
    row("1120", None, None, &[], RowMark::LieZero),
    row("1121", None, None, &[], RowMark::LieZero),
    row("1122", None, None, &[], RowMark::LieZero),
    row("1200", None, None, &[], RowMark::LieZero),
    row("1201", None, None, &[], RowMark::LieZero),
    row("1202", None, None, &[], RowMark::LieZero),
    row("1210", None, None, &[], RowMark::LieZero),
    row("1211", None, None, &[], RowMark::LieZero),
    row("1212", None, None, &[], RowMark::LieZero),
    row("1220", None, None, &[], RowMark::LieZero),
    row("1221", None, None, &[], RowMark::LieZero),
    row("1222", None, None, &[], RowMark::LieZero),
    row("2000", None, Some(lie(8, 0, 2, 3)), &[im(1, 2, 7, -3)], RowMark::Contributes),
    row("2001", None, Some(lie(-8, 1, 2, 2)), &[im(3, 2, 6, -4)], RowMark::Contributes),
    row("2002", None, Some(lie(-8, 1, 4, 1)), &[], RowMark::IntegralZero),
    row("2010", None, Some(lie(-8, 1, 2, 2)), &[im(-3, 4, 6, -4)], RowMark::Contributes),
    row("2011", None, Some(lie(8, 2, 2, 1)), &[], RowMark::IntegralZero),
    row("2012", None, Some(lie(4, 2, 4, 0)), &[im(1, 2, 5, -3)], RowMark::Contributes),
    row("2020", None, Some(lie(-8, 1, 4, 1)), &[im(-1, 4, 6, -2)], RowMark::Contributes),
    row("2021", None, Some(lie(8, 2, 4, 0)), &[im(-1, 1, 5, -3)], RowMark::Contributes),
    row("2022", None, None, &[], RowMark::LieZero),
    row("2100", None, Some(lie(-8, 1, 2, 2)), &[im(1, 2, 6, -4), im(-1, 12, 6, 0)], RowMark::Contributes),
    row("2101", None, Some(lie(8, 2, 2, 1)), &[im(-1, 4, 5, -1)], RowMark::Contributes),
    row("2102", None, Some(lie(4, 2, 4, 0)), &[im(-1, 2, 5, -3)], RowMark::Contributes),
    row("2110", None, Some(lie(8, 2, 2, 1)), &[], RowMark::IntegralZero),
    row("2111", None, Some(lie(-8, 3, 2, 0)), &[im(-1, 3, 4, -2)], RowMark::Contributes),
    row("2112", None, None, &[], RowMark::LieZero),
    row("2120", None, None, &[], RowMark::LieZero),
    row("2121", None, None, &[], RowMark::LieZero),
    row("2122", None, None, &[], RowMark::LieZero),
    row("2200", None, None, &[], RowMark::LieZero),
    row("2201", None, None, &[], RowMark::LieZero),
    row("2202", None, None, &[], RowMark::LieZero),
    row("2210", None, None, &[], RowMark::LieZero),
    row("2211", None, None, &[], RowMark::LieZero),
    row("2212", None, None, &[], RowMark::LieZero),
    row("2220", None, None, &[], RowMark::LieZero),
    row("2221", None, None, &[], RowMark::LieZero),
    row("2222", None, None, &[], RowMark::LieZero),
];

#[rustfmt::skip]
static ERRATA: &[(&str, &[IntegralCoeff])] = &[
    ("100", &[im(-1, 2, 5, -1)]),
    ("102", &[]),
    ("210", &[im(-1, 4, 4, 0)]),
    ("0021", &[im(7, 8, 6, -4), im(-1, 12, 6, 0)]),
    ("0022", &[im(1, 8, 6, -2)]),
    ("0112", &[]),
    ("1102", &[]),
    ("2100", &[im(1, 8, 6, -4), im(-1, 12, 6, 0)]),
    ("2111", &[im(-5, 16, 4, -2)]),
];
