from keras.models import Sequential
from keras.layers import Dense

HIDDEN = 96
OUTPUT = HIDDEN - 48

model = Sequential()
model.add(Dense(HIDDEN))
model.add(Dense(OUTPUT, activation='softmax'))
