import keras.models as km
from keras import layers as L

model = km.Sequential()
model.add(L.Dense(32, activation='relu'))
model.add(L.Dense(1))
