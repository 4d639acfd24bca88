// Lives in its own binary: clearing the arena would disturb concurrent tests.

use msoword::types::{clear_type_arena, sentence_type};
use msoword::words::FiniteWord;

#[test]
fn stale_types_are_rejected() {
    let a = sentence_type(&FiniteWord::parse("0110").unwrap(), 2).unwrap();
    assert!(a.concat(&a).is_ok());
    clear_type_arena();
    assert!(a.concat(&a).is_err());
    assert!(a.summary().is_err());
    let b = sentence_type(&FiniteWord::parse("0110").unwrap(), 2).unwrap();
    assert!(b.concat(&b).is_ok());
    assert_ne!(a, b);
}
