from rest_framework import serializers

from . import services
from .exceptions import LogicError
from .formats import parse_quantifiers, parse_structure, parse_team
from .grammar import parse_formula
from .rewrite import prenexify
from .semantics import Bounded
from .structures import Team
from .syntax import format_path, to_text
from .validators import (
    MAX_EXTRA_VARIABLES,
    validate_formula,
    validate_search_size,
    validate_variable_list,
)
from .verify import entails, z_equivalent


def _subset_text(values, domain):
    order = {element: i for i, element in enumerate(domain)}
    return sorted(values, key=order.__getitem__)


class QuantifiersMixin(serializers.Serializer):
    quantifiers = serializers.CharField(required=False, allow_blank=True, default="")

    def registry(self):
        registry = services.registry()
        text = self.validated_data.get("quantifiers")
        if not text:
            return registry
        try:
            return parse_quantifiers(text, registry, source="quantifiers")
        except LogicError as error:
            raise serializers.ValidationError({"quantifiers": str(error)})

    def link(self, registry, text):
        try:
            return registry.link(parse_formula(text))
        except LogicError as error:
            raise serializers.ValidationError({"formula": str(error)})


class ModelInputSerializer(QuantifiersMixin):
    """A structure, a team over it and a formula, all in their text formats."""

    structure = serializers.CharField()
    team = serializers.CharField(required=False, allow_blank=True, default="")
    formula = serializers.CharField(validators=[validate_formula])
    strict = serializers.BooleanField(default=False)

    def validate(self, attrs):
        try:
            structure = parse_structure(attrs["structure"], "structure")
        except LogicError as error:
            raise serializers.ValidationError({"structure": str(error)})
        try:
            team = parse_team(attrs["team"], structure, "team") if attrs["team"] else Team.unit()
        except LogicError as error:
            raise serializers.ValidationError({"team": str(error)})
        attrs["parsed"] = (structure, team)
        return attrs


class EvaluateSerializer(ModelInputSerializer):
    bounded = serializers.ChoiceField(
        choices=[mode.value for mode in Bounded], required=False, allow_null=True, default=None
    )
    tarski = serializers.BooleanField(default=False)

    def save(self, **kwargs):
        structure, team = self.validated_data["parsed"]
        registry = self.registry()
        formula = self.link(registry, self.validated_data["formula"])
        try:
            result = services.evaluate(
                structure,
                team,
                formula,
                registry,
                strict=self.validated_data["strict"],
                bounded=self.validated_data["bounded"],
                tarski=self.validated_data["tarski"],
            )
        except LogicError as error:
            raise serializers.ValidationError(str(error))
        return {"result": result}


class MeaningSerializer(ModelInputSerializer):
    def save(self, **kwargs):
        structure, team = self.validated_data["parsed"]
        registry = self.registry()
        formula = self.link(registry, self.validated_data["formula"])
        try:
            found = services.meaning(
                structure, team, formula, registry, strict=self.validated_data["strict"]
            )
        except LogicError as error:
            raise serializers.ValidationError(str(error))
        functions = [
            {
                (" ".join(f"{v}={row[v]}" for v in row) or "-"): _subset_text(
                    values, structure.domain
                )
                for row, values in function.items()
            }
            for function in found.functions
        ]
        initial = None
        if found.sentence_initial is not None:
            initial = [_subset_text(value, structure.domain) for value in found.sentence_initial]
        return {"functions": functions, "count": len(functions), "sentence_initial": initial}


class EquivalenceSerializer(QuantifiersMixin):
    left = serializers.CharField(validators=[validate_formula])
    right = serializers.CharField(validators=[validate_formula])
    modulus = serializers.CharField(
        required=False, allow_blank=True, default="", validators=[validate_variable_list]
    )
    size = serializers.IntegerField(
        required=False, min_value=1, allow_null=True, default=None, validators=[validate_search_size]
    )
    extra = serializers.IntegerField(
        required=False, min_value=0, max_value=MAX_EXTRA_VARIABLES, allow_null=True, default=None
    )
    seed = serializers.IntegerField(required=False, allow_null=True, default=None)
    strict = serializers.BooleanField(default=False)
    bounded = serializers.ChoiceField(
        choices=[mode.value for mode in Bounded], required=False, allow_null=True, default=None
    )
    entails = serializers.BooleanField(default=False)

    def save(self, **kwargs):
        data = self.validated_data
        registry = self.registry()
        left = self.link(registry, data["left"])
        right = self.link(registry, data["right"])
        check = entails if data["entails"] else z_equivalent
        try:
            verdict = check(
                left,
                right,
                [v.strip() for v in data["modulus"].split(",") if v.strip()],
                bounds=services.search_bounds(data["size"], data["extra"], data["seed"]),
                config=services.eval_config(data["strict"], data["bounded"]),
                registry=registry,
                bounded=bool(data["bounded"]),
            )
        except LogicError as error:
            raise serializers.ValidationError(str(error))
        return services.verdict_payload(verdict)


class PrenexSerializer(QuantifiersMixin):
    formula = serializers.CharField(validators=[validate_formula])

    def save(self, **kwargs):
        registry = self.registry()
        formula = self.link(registry, self.validated_data["formula"])
        try:
            rewrite = prenexify(formula, services.rewrite_context(registry))
        except LogicError as error:
            raise serializers.ValidationError(str(error))
        return {
            "formula": to_text(rewrite.formula),
            "modulus": sorted(rewrite.modulus),
            "steps": [
                {
                    "rule": step.rule,
                    "path": format_path(step.path),
                    "modulus": sorted(step.modulus),
                    "claim": str(step.claim),
                }
                for step in rewrite.steps
            ],
        }
