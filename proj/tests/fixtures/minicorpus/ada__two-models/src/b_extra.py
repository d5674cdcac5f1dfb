from keras.models import Sequential
from keras.layers import Conv2D, Flatten, Dense

model = Sequential([
    Conv2D(16, (3, 3), input_shape=(32, 32, 3)),
    Flatten(),
    Dense(10, activation='softmax'),
])
model.compile(optimizer='adam', loss='categorical_crossentropy')
