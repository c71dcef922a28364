// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

/// Pretty JSON with object keys in sorted order, so identical values always
/// serialize to identical bytes.
pub fn to_sorted_string<T: Serialize + ?Sized>(value: &T) -> String {
    // serde_json's default Map is a BTreeMap, so a round trip through Value
    // sorts every object.
    let v = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&v).expect("json value");
    s.push('\n');
    s
}
