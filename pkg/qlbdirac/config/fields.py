"""
Fields that parse and validate the text values of a configuration file.

Every field receives the raw string after the ``=`` on its line (or
:exc:`~qlbdirac.config.exceptions.NoData` when the key is absent) and
returns a typed value.
"""
import copy
import math
from gettext import gettext as _

from .exceptions import ConfigError, InvalidDataException, NoData, ValidationException


class ErrorMessageMixin:
    """
    Collects ``default_error_messages`` along the class hierarchy and lets
    instances override them.
    """
    default_error_messages = {}

    def __init__(self, error_messages=None, **kwargs):
        super().__init__(**kwargs)

        messages = {}
        for c in reversed(self.__class__.__mro__):
            messages.update(getattr(c, 'default_error_messages', {}))
        messages.update(error_messages or {})
        self.error_messages = messages

    def error(self, code, params=None, cls=ValidationException, **kwargs):
        """
        Construct a validation exception with the message registered for
        ``code``, formatted with ``params``.
        """
        message = self.error_messages[code]
        if params:
            message = message.format(**params)
        return cls(message, code=code, **kwargs)

    def __deepcopy__(self, memo):
        obj = copy.copy(self)
        memo[id(self)] = obj
        obj.error_messages = dict(self.error_messages)
        return obj


class Field(ErrorMessageMixin):
    """
    The base class for all fields. By itself it only enforces
    :attr:`required` and :attr:`default`.

    **Attributes**

    .. autoattribute:: required
    .. autoattribute:: default
        :annotation:

    .. autoattribute:: default_error_messages
        :annotation:
    """

    #: Is this key required to be present in the configuration.
    required = True

    #: Text used when the key is absent. ``None`` is passed through as is,
    #: meaning the value is derived from other keys.
    default = NoData

    #: required
    #:     Raised when the key is absent but required.
    default_error_messages = {
        'required': _("This key is required"),
    }

    def __init__(self, required=None, error_messages=None, **kwargs):
        if 'default' in kwargs:
            self.default = kwargs.pop('default')

        super().__init__(error_messages=error_messages, **kwargs)

        if required is not None:
            self.required = required
        elif self.has_default:
            self.required = False

        if self.required and self.has_default:
            raise ValueError("A field cannot have a default and be required")

    @property
    def has_default(self):
        return self.default is not NoData

    def clean(self, data):
        if data is NoData:
            if self.has_default:
                data = self.default
            elif self.required:
                raise self.error('required')
            else:
                raise NoData
        if data is None:
            return None
        return self.parse(data.strip() if isinstance(data, str) else data)

    def parse(self, text):
        return text


class StringField(Field):
    """
    Any text.

    .. autoattribute:: min_length
    """

    #: The minimum acceptable length. A value of 1 forbids empty values.
    min_length = 0

    #: non_empty
    #:     Raised when the value is empty but :attr:`min_length` is 1.
    #:
    #: min_length
    #:     Raised when the value is shorter than :attr:`min_length`.
    default_error_messages = {
        'non_empty': _("This key can not be empty"),
        'min_length': _("Minimum length {min}"),
    }

    def __init__(self, min_length=None, **kwargs):
        super().__init__(**kwargs)
        if min_length is not None:
            self.min_length = min_length

    def parse(self, text):
        if len(text) < self.min_length:
            if self.min_length == 1:
                raise self.error('non_empty')
            raise self.error('min_length', {'min': self.min_length})
        return text


class BooleanField(Field):
    """
    ``true``, ``yes``, ``on`` or ``1`` and their opposites, in any case.
    """
    truthy = frozenset(['true', 'yes', 'on', '1'])
    falsy = frozenset(['false', 'no', 'off', '0'])

    default_error_messages = {
        'invalid_boolean': _("Expected true or false"),
    }

    def parse(self, text):
        lowered = text.lower()
        if lowered in self.truthy:
            return True
        if lowered in self.falsy:
            return False
        raise self.error('invalid_boolean')


class NumberField(Field):
    """
    A finite number.

    .. autoattribute:: min

    .. autoattribute:: max

    .. autoattribute:: exclusive_min
    """

    #: The minimum allowable value. Defaults to no minimum.
    min = None

    #: The maximum allowable value. Defaults to no maximum.
    max = None

    #: If true the value must be strictly greater than :attr:`min`.
    exclusive_min = False

    type_name = 'number'

    #: invalid_number
    #:     Raised when the text is not a number of the expected type.
    #:
    #: not_finite
    #:     Raised for infinities and NaN.
    #:
    #: min_value, greater_than, max_value
    #:     Raised when the value is out of range.
    default_error_messages = {
        'invalid_number': _("Not a valid {type}"),
        'not_finite': _("This must be a finite number"),
        'min_value': _("This must be equal to or greater than the minimum of {min}"),
        'greater_than': _("This must be greater than {min}"),
        'max_value': _("This must be equal to or less than the maximum of {max}"),
    }

    def __init__(self, min=None, max=None, exclusive_min=None, **kwargs):
        super().__init__(**kwargs)
        if min is not None:
            self.min = min
        if max is not None:
            self.max = max
        if exclusive_min is not None:
            self.exclusive_min = exclusive_min

    def convert(self, text):
        return float(text)

    def parse(self, text):
        try:
            value = self.convert(text)
        except (TypeError, ValueError):
            raise self.error('invalid_number', {'type': self.type_name})

        if not math.isfinite(value):
            raise self.error('not_finite')

        if self.min is not None:
            if self.exclusive_min and not value > self.min:
                raise self.error('greater_than', {'min': self.min})
            if value < self.min:
                raise self.error('min_value', {'min': self.min})

        if self.max is not None and value > self.max:
            raise self.error('max_value', {'max': self.max})

        return value


class IntegerField(NumberField):
    type_name = 'integer'

    def convert(self, text):
        return int(text, 10)


class FloatField(NumberField):
    type_name = 'number'


class ChoiceField(Field):
    """
    One of a fixed set of words.

    .. autoattribute:: choices
        :annotation: = set()
    """

    #: The accepted values.
    choices = None

    default_error_messages = {
        'invalid_choice': _("Not a valid choice, expected one of: {choices}"),
    }

    def __init__(self, choices=None, **kwargs):
        super().__init__(**kwargs)
        if choices is not None:
            self.choices = set(choices)

    def parse(self, text):
        if text not in self.choices:
            raise self.error('invalid_choice', {'choices': ', '.join(sorted(self.choices))})
        return text

    def __deepcopy__(self, memo):
        obj = super().__deepcopy__(memo)
        obj.choices = copy.deepcopy(obj.choices, memo)
        return obj


class ChoiceMapField(Field):
    """
    One of a fixed set of words, each mapped to the value it stands for.

    .. code:: python

        >>> field = ChoiceMapField({'periodic': Boundary.PERIODIC, 'copy': Boundary.COPY})
        >>> field.clean('copy')
        <Boundary.COPY: 'copy'>
    """

    #: Maps accepted words to cleaned values.
    choices = None

    default_error_messages = {
        'invalid_choice': _("Not a valid choice, expected one of: {choices}"),
    }

    def __init__(self, choices=None, **kwargs):
        super().__init__(**kwargs)
        if choices is not None:
            self.choices = dict(choices)

    def parse(self, text):
        try:
            return self.choices[text]
        except KeyError:
            raise self.error('invalid_choice', {'choices': ', '.join(sorted(self.choices))})

    def __deepcopy__(self, memo):
        obj = super().__deepcopy__(memo)
        obj.choices = copy.deepcopy(obj.choices, memo)
        return obj


class ListField(Field):
    """
    A comma separated list, each item cleaned by :attr:`field`.
    An empty value is an empty list.

    .. code:: python

        class GridValidator(Validator):
            extent = ListField(IntegerField(min=2), min_items=1, max_items=3)

    .. autoattribute:: field
        :annotation:
    """

    #: The field every item is cleaned with.
    field = None

    min_items = 0
    max_items = None

    default_error_messages = {
        'min_items': _("Expected at least {min} items"),
        'max_items': _("Expected at most {max} items"),
    }

    def __init__(self, field=None, min_items=None, max_items=None, **kwargs):
        super().__init__(**kwargs)
        if field is not None:
            self.field = field
        if min_items is not None:
            self.min_items = min_items
        if max_items is not None:
            self.max_items = max_items

    def parse(self, text):
        items = [item.strip() for item in text.split(',')] if text else []

        if len(items) < self.min_items:
            raise self.error('min_items', {'min': self.min_items})
        if self.max_items is not None and len(items) > self.max_items:
            raise self.error('max_items', {'max': self.max_items})

        errors = InvalidDataException()
        cleaned = []
        for i, item in enumerate(items):
            try:
                cleaned.append(self.field.clean(item))
            except ConfigError as err:
                errors.add(i, err)

        if errors:
            raise errors
        return cleaned

    def __deepcopy__(self, memo):
        obj = super().__deepcopy__(memo)
        obj.field = copy.deepcopy(self.field, memo)
        return obj
