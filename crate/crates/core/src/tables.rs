//! Known-good reference data for the verification suites: the catalog of
//! grafted and exotic trees up to size 3 with their symmetry coefficients,
//! and the thirteen order conditions through order 3 in monomial form.

/// One tree row: grafted form and symmetry, plus the paired exotic class
/// where the grafted count is even.
pub struct TreeRow {
    pub size2: u32,
    pub grafted: &'static str,
    pub sigma_grafted: u64,
    pub exotic: Option<(&'static str, u64)>,
}

pub const TREE_CATALOG: &[TreeRow] = &[
    TreeRow { size2: 1, grafted: "x", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 2, grafted: "b", sigma_grafted: 1, exotic: Some(("b", 1)) },
    TreeRow { size2: 3, grafted: "b[x]", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 3, grafted: "(b),x", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 4, grafted: "b[b]", sigma_grafted: 1, exotic: Some(("b[b]", 1)) },
    TreeRow { size2: 4, grafted: "b[x,x]", sigma_grafted: 2, exotic: Some(("b[1,1]", 2)) },
    TreeRow { size2: 4, grafted: "(b),b", sigma_grafted: 1, exotic: Some(("(b),b", 1)) },
    TreeRow { size2: 4, grafted: "(b[x]),x", sigma_grafted: 1, exotic: Some(("(b[1]),1", 1)) },
    TreeRow { size2: 5, grafted: "b[b,x]", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 5, grafted: "b[b[x]]", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 5, grafted: "b[x,x,x]", sigma_grafted: 6, exotic: None },
    TreeRow { size2: 5, grafted: "(b[x]),b", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 5, grafted: "(b),b[x]", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 5, grafted: "(b[x,x]),x", sigma_grafted: 2, exotic: None },
    TreeRow { size2: 5, grafted: "(b,b),x", sigma_grafted: 2, exotic: None },
    TreeRow { size2: 5, grafted: "(b[b]),x", sigma_grafted: 1, exotic: None },
    TreeRow { size2: 6, grafted: "b[b[b]]", sigma_grafted: 1, exotic: Some(("b[b[b]]", 1)) },
    TreeRow { size2: 6, grafted: "b[b,b]", sigma_grafted: 2, exotic: Some(("b[b,b]", 2)) },
    TreeRow { size2: 6, grafted: "b[b,x,x]", sigma_grafted: 2, exotic: Some(("b[b,1,1]", 2)) },
    TreeRow { size2: 6, grafted: "b[b[x],x]", sigma_grafted: 1, exotic: Some(("b[b[1],1]", 1)) },
    TreeRow { size2: 6, grafted: "b[b[x,x]]", sigma_grafted: 2, exotic: Some(("b[b[1,1]]", 2)) },
    TreeRow { size2: 6, grafted: "b[x,x,x,x]", sigma_grafted: 24, exotic: Some(("b[1,1,2,2]", 8)) },
    TreeRow { size2: 6, grafted: "(b,b),b", sigma_grafted: 2, exotic: Some(("(b,b),b", 2)) },
    TreeRow { size2: 6, grafted: "(b[b]),b", sigma_grafted: 1, exotic: Some(("(b[b]),b", 1)) },
    TreeRow { size2: 6, grafted: "(b),b[b]", sigma_grafted: 1, exotic: Some(("(b),b[b]", 1)) },
    TreeRow { size2: 6, grafted: "(b[x,x]),b", sigma_grafted: 2, exotic: Some(("(b[1,1]),b", 2)) },
    TreeRow { size2: 6, grafted: "(b[x]),b[x]", sigma_grafted: 1, exotic: Some(("(b[1]),b[1]", 1)) },
    TreeRow { size2: 6, grafted: "(b),b[x,x]", sigma_grafted: 2, exotic: Some(("(b),b[1,1]", 2)) },
    TreeRow { size2: 6, grafted: "(b,b[x]),x", sigma_grafted: 1, exotic: Some(("(b,b[1]),1", 1)) },
    TreeRow { size2: 6, grafted: "(b[b,x]),x", sigma_grafted: 1, exotic: Some(("(b[b,1]),1", 1)) },
    TreeRow { size2: 6, grafted: "(b[b[x]]),x", sigma_grafted: 1, exotic: Some(("(b[b[1]]),1", 1)) },
    TreeRow { size2: 6, grafted: "(b[x,x,x]),x", sigma_grafted: 6, exotic: Some(("(b[1,1,2]),2", 2)) },
];

pub const GRAFTED_TREE_COUNTS: [usize; 6] = [1, 1, 2, 4, 8, 16];
pub const EXOTIC_TREE_COUNTS: [usize; 3] = [1, 4, 16];

/// One order condition: the target forest, whether it is redundant by
/// multiplicativity, and the combination as (grafted monomial, coefficient)
/// with exact rationals. The empty monomial is the constant 1.
pub struct ConditionRow {
    pub order: u32,
    pub target: &'static str,
    pub starred: bool,
    pub terms: &'static [(&'static str, i64, i64)],
}

pub const CONDITION_CATALOG: &[ConditionRow] = &[
    ConditionRow {
        order: 1,
        target: "b",
        starred: false,
        terms: &[("b", 1, 1), ("", -1, 1)],
    },
    ConditionRow {
        order: 2,
        target: "b[0,0]",
        starred: false,
        terms: &[("b[x,x]", 1, 1), ("", -1, 2), ("b", 1, 1), ("b[x]", -2, 1)],
    },
    ConditionRow {
        order: 2,
        target: "b[b]",
        starred: false,
        terms: &[("b[b]", 1, 1), ("", -1, 2), ("b", 1, 1), ("b[x]", -2, 1)],
    },
    ConditionRow {
        order: 2,
        target: "b,b",
        starred: true,
        terms: &[("b,b", 1, 1), ("", 1, 1), ("b", -2, 1)],
    },
    ConditionRow {
        order: 3,
        target: "b[b,b]",
        starred: false,
        terms: &[
            ("b[b,x]", -4, 1),
            ("b", 1, 1),
            ("b[b,b]", 1, 1),
            ("b[x]", -4, 1),
            ("", -1, 3),
            ("b[x,x]", 4, 1),
            ("b[b]", 2, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[b[b]]",
        starred: false,
        terms: &[
            ("b[x],b", 2, 1),
            ("b", 3, 2),
            ("b,b", -1, 1),
            ("b[x],b[x]", -1, 1),
            ("b[b[b]]", 1, 1),
            ("b[x]", -2, 1),
            ("", -1, 2),
            ("b[b]", 1, 1),
            ("b[b[x]]", -2, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[0,0,b]",
        starred: false,
        terms: &[
            ("b[b,x]", -2, 1),
            ("b", 1, 1),
            ("b[b,x,x]", 1, 1),
            ("b[x]", -4, 1),
            ("", -1, 3),
            ("b[x,x]", 5, 1),
            ("b[x,x,x]", -2, 1),
            ("b[b]", 1, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[b[0],0]",
        starred: false,
        terms: &[
            ("b[x],b", 1, 1),
            ("b[b,x]", -1, 1),
            ("b", 1, 1),
            ("b,b", -1, 2),
            ("b[x],b[x]", -1, 2),
            ("b[x]", -2, 1),
            ("", -1, 3),
            ("b[x,x]", 1, 1),
            ("b[b]", 1, 1),
            ("b[b[x]]", -1, 1),
            ("b[b[x],x]", 1, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[b[0,0]]",
        starred: false,
        terms: &[
            ("b[x],b", 2, 1),
            ("b", 3, 2),
            ("b,b", -1, 1),
            ("b[x],b[x]", -1, 1),
            ("b[x]", -2, 1),
            ("", -1, 2),
            ("b[b]", 1, 1),
            ("b[b[x]]", -2, 1),
            ("b[b[x,x]]", 1, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[0,0,1,1]",
        starred: false,
        terms: &[
            ("b", 1, 1),
            ("b[x]", -4, 1),
            ("b[x,x]", 6, 1),
            ("", -1, 3),
            ("b[x,x,x]", -4, 1),
            ("b[x,x,x,x]", 1, 1),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b,b,b",
        starred: true,
        terms: &[("b,b,b", 1, 1), ("b", 3, 1), ("b,b", -3, 1), ("", -1, 1)],
    },
    ConditionRow {
        order: 3,
        target: "b[b],b",
        starred: true,
        terms: &[
            ("b[b],b", 1, 1),
            ("b[x],b", -2, 1),
            ("b", -3, 2),
            ("b,b", 1, 1),
            ("b[x]", 2, 1),
            ("b[b]", -1, 1),
            ("", 1, 2),
        ],
    },
    ConditionRow {
        order: 3,
        target: "b[0,0],b",
        starred: true,
        terms: &[
            ("b[x,x],b", 1, 1),
            ("b[x],b", -2, 1),
            ("b", -3, 2),
            ("b,b", 1, 1),
            ("b[x]", 2, 1),
            ("b[x,x]", -1, 1),
            ("", 1, 2),
        ],
    },
];
