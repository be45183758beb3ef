use proptest::prelude::*;

use cylsphere_core::{expand_oracle, BTable, ConstraintSystem, ConstraintTerm, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
}

proptest! {
    #[test]
    fn rational_text_round_trip(x in rational()) {
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    #[test]
    fn table_json_round_trip(j in 0u32..=12, k in 0u32..=12) {
        let table = expand_oracle(j, k);
        let json = serde_json::to_string(&table).unwrap();
        let back: BTable = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        prop_assert_eq!(back, table);
    }

    #[test]
    fn system_json_round_trip(
        pairs in prop::collection::btree_set((0u32..=6, 0u32..=6), 1..=10),
        a in rational(),
    ) {
        let terms = pairs.into_iter().map(|(j, k)| ConstraintTerm { j, k, a: a.clone() }).collect();
        let system = ConstraintSystem::with_default_radii(terms).unwrap();
        let json = serde_json::to_string(&system).unwrap();
        prop_assert!(json.contains(r#""rho_inner":"7/20""#));
        let back: ConstraintSystem = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, system);
    }
}
