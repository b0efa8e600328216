//! W3C and third-party vocabulary terms used by the converter.

macro_rules! vocabulary {
    ($(#[$doc:meta])* $module:ident, $ns:literal, { $($func:ident, $konst:ident => $local:literal;)* }) => {
        $(#[$doc])*
        pub mod $module {
            use crate::rdf::Iri;

            pub const NS: &str = $ns;
            $(
                pub const $konst: &str = concat!($ns, $local);
                pub fn $func() -> Iri {
                    Iri::from_static($konst)
                }
            )*
        }
    };
}

vocabulary!(rdf, "http://www.w3.org/1999/02/22-rdf-syntax-ns#", {
    type_, TYPE => "type";
    statement, STATEMENT => "Statement";
    subject, SUBJECT => "subject";
    predicate, PREDICATE => "predicate";
    object, OBJECT => "object";
    property, PROPERTY => "Property";
    lang_string, LANG_STRING => "langString";
    list, LIST => "List";
    first, FIRST => "first";
    rest, REST => "rest";
    nil, NIL => "nil";
    singleton_property_of, SINGLETON_PROPERTY_OF => "singletonPropertyOf";
});

vocabulary!(rdfs, "http://www.w3.org/2000/01/rdf-schema#", {
    class, CLASS => "Class";
    sub_class_of, SUB_CLASS_OF => "subClassOf";
    sub_property_of, SUB_PROPERTY_OF => "subPropertyOf";
    domain, DOMAIN => "domain";
    range, RANGE => "range";
    comment, COMMENT => "comment";
    label, LABEL => "label";
    datatype, DATATYPE => "Datatype";
});

vocabulary!(owl, "http://www.w3.org/2002/07/owl#", {
    thing, THING => "Thing";
    irreflexive_property, IRREFLEXIVE_PROPERTY => "IrreflexiveProperty";
    functional_property, FUNCTIONAL_PROPERTY => "FunctionalProperty";
    disjoint_with, DISJOINT_WITH => "disjointWith";
    property_disjoint_with, PROPERTY_DISJOINT_WITH => "propertyDisjointWith";
    inverse_of, INVERSE_OF => "inverseOf";
    datatype_property, DATATYPE_PROPERTY => "DatatypeProperty";
    object_property, OBJECT_PROPERTY => "ObjectProperty";
    equivalent_class, EQUIVALENT_CLASS => "equivalentClass";
    class, CLASS => "Class";
    ontology, ONTOLOGY => "Ontology";
});

vocabulary!(xsd, "http://www.w3.org/2001/XMLSchema#", {
    string, STRING => "string";
    boolean, BOOLEAN => "boolean";
    integer, INTEGER => "integer";
    non_negative_integer, NON_NEGATIVE_INTEGER => "nonNegativeInteger";
    decimal, DECIMAL => "decimal";
    date, DATE => "date";
    date_time, DATE_TIME => "dateTime";
    any_uri, ANY_URI => "anyURI";
});

vocabulary!(skos, "http://www.w3.org/2004/02/skos/core#", {
    pref_label, PREF_LABEL => "prefLabel";
});

vocabulary!(prov, "http://www.w3.org/ns/prov#", {
    entity, ENTITY => "Entity";
    activity, ACTIVITY => "Activity";
    software_agent, SOFTWARE_AGENT => "SoftwareAgent";
    was_generated_by, WAS_GENERATED_BY => "wasGeneratedBy";
    was_associated_with, WAS_ASSOCIATED_WITH => "wasAssociatedWith";
});

vocabulary!(
    /// Contextual-fluent vocabulary used by the NdFluents model.
    ndfluents, "http://www.emse.fr/~zimmermann/Ontologies/ndfluents.ttl#", {
    contextual_part_of, CONTEXTUAL_PART_OF => "contextualPartOf";
    contextual_extent, CONTEXTUAL_EXTENT => "contextualExtent";
});

vocabulary!(void, "http://rdfs.org/ns/void#", {
    dataset, DATASET => "Dataset";
    triples, TRIPLES => "triples";
    vocabulary, VOCABULARY => "vocabulary";
});

vocabulary!(dcat, "http://www.w3.org/ns/dcat#", {
    dataset, DATASET => "Dataset";
    distribution_class, DISTRIBUTION_CLASS => "Distribution";
    distribution, DISTRIBUTION => "distribution";
    media_type, MEDIA_TYPE => "mediaType";
    download_url, DOWNLOAD_URL => "downloadURL";
});

vocabulary!(dcterms, "http://purl.org/dc/terms/", {
    title, TITLE => "title";
    conforms_to, CONFORMS_TO => "conformsTo";
    identifier, IDENTIFIER => "identifier";
});

vocabulary!(media_types, "https://www.iana.org/assignments/media-types/", {
    n_triples, N_TRIPLES => "application/n-triples";
    n_quads, N_QUADS => "application/n-quads";
    trig, TRIG => "application/trig";
});
