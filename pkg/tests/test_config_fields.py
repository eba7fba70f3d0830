import copy

from qlbdirac.config.exceptions import InvalidDataException, NoData, ValidationException
from qlbdirac.config.fields import (
    BooleanField, ChoiceField, ChoiceMapField, Field, FloatField, IntegerField, ListField,
    NumberField, StringField)
from qlbdirac.lattice import Boundary

from .utils import QLBTestCase


class TestField(QLBTestCase):

    def test_required(self):
        field = Field()
        self.assertEqual("hello", field.clean("hello"))
        self.assertEqual("", field.clean(""))

        with self.assertRaises(ValidationException) as cm:
            field.clean(NoData)
        self.assertEqual('required', cm.exception.code)

    def test_not_required(self):
        field = StringField(required=False)
        with self.assertRaises(NoData):
            field.clean(NoData)

    def test_strips(self):
        self.assertEqual("hello", Field().clean("  hello\t"))

    def test_copy(self):
        original = StringField(required=False, error_messages={'required': 'foo'})
        copied = copy.deepcopy(original)

        self.assertEqual(original.required, copied.required)
        self.assertEqual(original.error_messages, copied.error_messages)

        self.assertTrue(original.error_messages is not copied.error_messages)
        original.error_messages['required'] = 'bar'
        self.assertEqual(copied.error_messages['required'], 'foo')

    def test_default_is_parsed(self):
        field = IntegerField(default="12")
        self.assertFalse(field.required)
        self.assertEqual(12, field.clean(NoData))
        self.assertEqual(3, field.clean("3"))

    def test_none_default(self):
        self.assertIsNone(FloatField(default=None).clean(NoData))

    def test_required_default(self):
        with self.assertRaises(ValueError):
            Field(default="foo", required=True)

    def test_error_message_override(self):
        field = IntegerField(error_messages={'invalid_number': "Whole numbers only"})
        with self.assertRaises(ValidationException) as cm:
            field.clean("1.5")
        self.assertEqual("Whole numbers only", cm.exception.msg)
        self.assertEqual('invalid_number', cm.exception.code)


class TestStringField(QLBTestCase):

    def test_simple(self):
        field = StringField()
        self.assertEqual("output/run", field.clean("output/run"))
        self.assertEqual("", field.clean(""))

    def test_non_empty(self):
        with self.assertRaises(ValidationException) as cm:
            StringField(min_length=1).clean("   ")
        self.assertEqual('non_empty', cm.exception.code)

    def test_min_length(self):
        field = StringField(min_length=3)
        self.assertEqual("hello", field.clean("hello"))
        with self.assertRaises(ValidationException) as cm:
            field.clean("no")
        self.assertEqual('min_length', cm.exception.code)
        self.assertEqual("Minimum length 3", cm.exception.msg)


class TestBooleanField(QLBTestCase):

    def test_words(self):
        field = BooleanField()
        for text in ('true', 'Yes', 'ON', '1'):
            self.assertIs(True, field.clean(text))
        for text in ('false', 'No', 'off', '0'):
            self.assertIs(False, field.clean(text))

    def test_invalid(self):
        for text in ('', 'maybe', '2'):
            with self.assertRaises(ValidationException) as cm:
                BooleanField().clean(text)
            self.assertEqual('invalid_boolean', cm.exception.code)


class TestNumberFields(QLBTestCase):

    def assertCode(self, code, field, text):
        with self.assertRaises(ValidationException) as cm:
            field.clean(text)
        self.assertEqual(code, cm.exception.code)

    def test_integer(self):
        field = IntegerField()
        self.assertEqual(1024, field.clean("1024"))
        self.assertEqual(-3, field.clean("-3"))
        for text in ('1.0', '1e3', 'ten', '', '0x10'):
            self.assertCode('invalid_number', field, text)

    def test_float(self):
        field = FloatField()
        self.assertEqual(0.006, field.clean("0.006"))
        self.assertEqual(1000.0, field.clean("1e3"))
        self.assertEqual(5.0, field.clean("5"))
        self.assertCode('invalid_number', field, 'fast')

    def test_not_finite(self):
        for text in ('nan', 'inf', '-Infinity'):
            self.assertCode('not_finite', FloatField(), text)

    def test_range(self):
        field = NumberField(min=0, max=10)
        self.assertEqual(0.0, field.clean("0"))
        self.assertEqual(10.0, field.clean("10"))
        self.assertCode('min_value', field, '-0.5')
        self.assertCode('max_value', field, '10.5')

    def test_exclusive_min(self):
        field = FloatField(min=0, exclusive_min=True)
        self.assertEqual(0.5, field.clean("0.5"))
        self.assertCode('greater_than', field, '0')

    def test_message(self):
        with self.assertRaises(ValidationException) as cm:
            IntegerField(min=2).clean("1")
        self.assertEqual(
            "This must be equal to or greater than the minimum of 2", cm.exception.msg)


class TestChoiceFields(QLBTestCase):

    def test_choice(self):
        field = ChoiceField({'free', 'njl', 'em'})
        self.assertEqual('njl', field.clean(' njl '))
        with self.assertRaises(ValidationException) as cm:
            field.clean('NJL')
        self.assertEqual('invalid_choice', cm.exception.code)
        self.assertEqual(
            "Not a valid choice, expected one of: em, free, njl", cm.exception.msg)

    def test_choice_map(self):
        field = ChoiceMapField({'periodic': Boundary.PERIODIC, 'copy': Boundary.COPY})
        self.assertIs(Boundary.COPY, field.clean('copy'))
        with self.assertRaises(ValidationException) as cm:
            field.clean('open')
        self.assertEqual('invalid_choice', cm.exception.code)

    def test_copy(self):
        original = ChoiceField({'a', 'b'})
        copied = copy.deepcopy(original)
        original.choices.add('c')
        self.assertEqual({'a', 'b'}, copied.choices)


class TestListField(QLBTestCase):

    def test_items(self):
        field = ListField(IntegerField(min=2))
        self.assertEqual([64, 32, 16], field.clean("64, 32,16"))
        self.assertEqual([], field.clean(""))

    def test_item_count(self):
        field = ListField(StringField(), min_items=1, max_items=3)
        with self.assertRaises(ValidationException) as cm:
            field.clean("")
        self.assertEqual('min_items', cm.exception.code)
        with self.assertRaises(ValidationException) as cm:
            field.clean("x, y, z, x")
        self.assertEqual('max_items', cm.exception.code)

    def test_item_errors(self):
        field = ListField(IntegerField(min=2))
        with self.assertRaises(InvalidDataException) as cm:
            field.clean("64, one, 1")
        self.assertEqual(cm.exception, InvalidDataException({
            1: [ValidationException("Not a valid integer", 'invalid_number')],
            2: [ValidationException(
                "This must be equal to or greater than the minimum of 2", 'min_value')],
        }))

    def test_copy(self):
        original = ListField(IntegerField())
        copied = copy.deepcopy(original)
        self.assertIsNot(original.field, copied.field)
